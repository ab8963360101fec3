#include "blockade/linop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blockade {

double ComplexVector::norm() const {
    double s = 0.0;
    for (const auto& z : data) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix c(rows, cols);
    for (std::size_t k = 0; k < data.size(); ++k) c.data[k] = std::conj(data[k]);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix a(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_error() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i; j < cols; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
    if (v.size() != cols) throw DimensionMismatchError("apply: vector length mismatch");
    ComplexVector out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const complexd* row = &data[i * cols];
        complexd acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * v.data[j];
        out[i] = acc;
    }
    return out;
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionMismatchError(what);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "matrix add: shape mismatch");
    ComplexMatrix c = a;
    for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] += b.data[k];
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "matrix sub: shape mismatch");
    ComplexMatrix c = a;
    for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] -= b.data[k];
    return c;
}

ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "matrix add: shape mismatch");
    for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] += b.data[k];
    return a;
}

ComplexMatrix& operator-=(ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "matrix sub: shape mismatch");
    for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] -= b.data[k];
    return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw DimensionMismatchError("matmul: inner dimension mismatch");
    ComplexMatrix c(a.rows, b.cols);
    // i-k-j order keeps the inner loop contiguous; skipping exact zeros pays
    // off because operator matrices here are mostly structural zeros.
    for (std::size_t i = 0; i < a.rows; ++i) {
        complexd* crow = &c.data[i * c.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const complexd aik = a(i, k);
            if (aik == complexd(0.0, 0.0)) continue;
            const complexd* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

ComplexMatrix operator*(complexd s, const ComplexMatrix& a) {
    ComplexMatrix c = a;
    for (auto& z : c.data) z *= s;
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k)
        m = std::max(m, std::abs(a.data[k] - b.data[k]));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t ia = 0; ia < a.rows; ++ia) {
        for (std::size_t ja = 0; ja < a.cols; ++ja) {
            const complexd av = a(ia, ja);
            if (av == complexd(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows; ++ib) {
                complexd* crow = &c.data[(ia * b.rows + ib) * c.cols + ja * b.cols];
                const complexd* brow = &b.data[ib * b.cols];
                for (std::size_t jb = 0; jb < b.cols; ++jb) crow[jb] = av * brow[jb];
            }
        }
    }
    return c;
}

// One cyclic Jacobi rotation annihilating a(p,q). V accumulates the unitary.
static void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows;
    const complexd apq = a(p, q);
    const double b = std::abs(apq);
    if (b == 0.0) return;

    const complexd phase = apq / b;  // e^{i phi}
    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * b);
    const double sgn = theta >= 0.0 ? 1.0 : -1.0;
    const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const complexd w = (t * c) * phase;  // s * e^{i phi}
    const complexd wc = std::conj(w);

    // columns p,q of A <- A R, with R = [[c, w], [-conj(w), c]] in (p,q) block
    for (std::size_t k = 0; k < n; ++k) {
        const complexd akp = a(k, p);
        const complexd akq = a(k, q);
        a(k, p) = c * akp - wc * akq;
        a(k, q) = w * akp + c * akq;
    }
    // rows p,q of A <- R^dag A
    for (std::size_t k = 0; k < n; ++k) {
        const complexd apk = a(p, k);
        const complexd aqk = a(q, k);
        a(p, k) = c * apk - w * aqk;
        a(q, k) = wc * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = complexd(a(p, p).real(), 0.0);
    a(q, q) = complexd(a(q, q).real(), 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        const complexd vkp = v(k, p);
        const complexd vkq = v(k, q);
        v(k, p) = c * vkp - wc * vkq;
        v(k, q) = w * vkp + c * vkq;
    }
}

static double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

// Lowest index wins ties so the phase convention is reproducible.
static std::size_t argmax_abs(const ComplexMatrix& v, std::size_t col) {
    std::size_t best = 0;
    double best_mag = std::abs(v(0, col));
    for (std::size_t i = 1; i < v.rows; ++i) {
        const double m = std::abs(v(i, col));
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    return best;
}

EigResult eig_hermitian(const ComplexMatrix& h) {
    if (h.rows != h.cols) throw DimensionMismatchError("eig_hermitian: matrix not square");
    if (h.hermiticity_error() > linop_tol::hermiticity)
        throw NotHermitianError("eig_hermitian: input deviates from h^dag beyond tolerance");

    const std::size_t n = h.rows;
    // Symmetrize exactly so rotations act on a true Hermitian matrix.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
        a(i, i) = complexd(a(i, i).real(), 0.0);
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = linop_tol::jacobi_offdiag * std::max(h.frobenius_norm(), 1e-300);
    const double skip = stop / (10.0 * static_cast<double>(n) + 10.0);

    bool converged = offdiag_norm(a) <= stop;
    for (int sweep = 0; sweep < linop_tol::jacobi_max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > skip) jacobi_rotate(a, v, p, q);
        converged = offdiag_norm(a) <= stop;
    }
    if (!converged) throw NoConvergenceError("eig_hermitian: Jacobi sweep cap exceeded");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    EigResult res;
    res.values.resize(n);
    res.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        res.values[k] = a(src, src).real();
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = v(i, src);
        // phase fix: largest-magnitude component real and nonnegative
        const std::size_t idx = argmax_abs(res.vectors, k);
        const complexd z = res.vectors(idx, k);
        const double m = std::abs(z);
        if (m > 0.0) {
            const complexd scale = std::conj(z) / m;
            for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) *= scale;
            res.vectors(idx, k) = complexd(m, 0.0);
        }
    }
    return res;
}

ComplexVector solve_linear(const ComplexMatrix& m, const ComplexVector& rhs) {
    if (m.rows != m.cols) throw DimensionMismatchError("solve_linear: matrix not square");
    if (rhs.size() != m.rows) throw DimensionMismatchError("solve_linear: rhs length mismatch");

    const std::size_t n = m.rows;
    ComplexMatrix a = m;
    ComplexVector b = rhs;
    const double pivot_floor = linop_tol::singular_pivot * m.frobenius_norm();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double pmag = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mag = std::abs(a(i, k));
            if (mag > pmag) {
                pmag = mag;
                pivot = i;
            }
        }
        if (pmag < pivot_floor || pmag == 0.0)
            throw SingularError("solve_linear: pivot below singularity threshold");
        if (pivot != k) {
            std::swap_ranges(&a.data[k * n], &a.data[k * n] + n, &a.data[pivot * n]);
            std::swap(b[k], b[pivot]);
        }
        const complexd inv = 1.0 / a(k, k);
        const complexd* rowk = &a.data[k * n];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == complexd(0.0, 0.0)) continue;
            const complexd lik = a(i, k) * inv;
            complexd* rowi = &a.data[i * n];
            rowi[k] = lik;
            for (std::size_t j = k + 1; j < n; ++j) rowi[j] -= lik * rowk[j];
            b[i] -= lik * b[k];
        }
    }

    ComplexVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        complexd acc = b[ii];
        const complexd* rowi = &a.data[ii * n];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= rowi[j] * x[j];
        x[ii] = acc / rowi[ii];
    }
    return x;
}

}  // namespace blockade
