#include "blockade/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace blockade {

DensityMatrix basis_density(std::size_t idx, std::size_t dim) {
    if (idx >= dim) throw DimensionMismatchError("basis_density: index out of range");
    DensityMatrix rho{ComplexMatrix(dim, dim)};
    rho.rho(idx, idx) = 1.0;
    return rho;
}

void validate_density(const DensityMatrix& rho, double herm_tol, double trace_tol,
                      double eig_floor) {
    const ComplexMatrix& m = rho.rho;
    if (m.rows != m.cols) throw DimensionMismatchError("density matrix not square");
    if (m.hermiticity_error() > herm_tol)
        throw InvalidParamsError("density matrix violates Hermiticity tolerance");
    complexd tr = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) tr += m(i, i);
    if (std::abs(tr - 1.0) > trace_tol)
        throw InvalidParamsError("density matrix trace deviates from 1");
    const EigResult eig = eig_hermitian(m);
    if (eig.values.front() < eig_floor)
        throw InvalidParamsError("density matrix violates numerical positivity");
}

ComplexVector vectorize(const ComplexMatrix& m) {
    ComplexVector v(m.rows * m.cols);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (std::size_t i = 0; i < m.rows; ++i) v[j * m.rows + i] = m(i, j);
    return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim) {
    if (v.size() != dim * dim) throw DimensionMismatchError("unvectorize: length mismatch");
    ComplexMatrix m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) m(i, j) = v[j * dim + i];
    return m;
}

Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<CollapseOp>& collapse_ops) {
    if (h.rows != h.cols) throw DimensionMismatchError("build_liouvillian: H not square");
    const std::size_t d = h.rows;
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    const complexd mi(0.0, -1.0);

    ComplexMatrix l = mi * (kron(eye, h) - kron(h.transpose(), eye));
    for (const auto& c : collapse_ops) {
        if (c.op.rows != d || c.op.cols != d)
            throw DimensionMismatchError("build_liouvillian: collapse op dimension mismatch");
        if (c.rate < 0.0) throw InvalidParamsError("build_liouvillian: negative rate");
        if (c.rate == 0.0) continue;
        const ComplexMatrix cdc = c.op.adjoint() * c.op;
        ComplexMatrix diss = complexd(2.0) * kron(c.op.conjugate(), c.op);
        diss -= kron(eye, cdc);
        diss -= kron(cdc.transpose(), eye);
        l += complexd(0.5 * c.rate) * diss;
    }

    Liouvillian out;
    out.dim = d;
    out.fro_norm = l.frobenius_norm();
    out.matrix = std::move(l);
    return out;
}

Liouvillian model_liouvillian(const ModelParams& p, const FockTruncation& t) {
    const ComplexMatrix h = build_h_full(p, t);
    std::vector<CollapseOp> ops;
    ops.push_back({p.kappa, joint_annihilation(t)});
    ops.push_back({p.gamma, joint_sigma_minus(t)});
    return build_liouvillian(h, ops);
}

static DensityMatrix hermitize_and_normalize(const ComplexMatrix& raw) {
    const std::size_t d = raw.rows;
    ComplexMatrix rho(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            rho(i, j) = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
    double tr = 0.0;
    for (std::size_t i = 0; i < d; ++i) tr += rho(i, i).real();
    if (std::abs(tr) < 1e-12)
        throw SingularError("steady_state: solution has vanishing trace");
    const double inv = 1.0 / tr;
    for (auto& z : rho.data) z *= inv;
    return DensityMatrix{std::move(rho)};
}

SteadySolution steady_state_full(const Liouvillian& l) {
    const std::size_t d = l.dim;
    const std::size_t n = d * d;
    if (n > lindblad_tol::max_liouville_dim)
        throw InvalidParamsError(
            "steady_state: Liouvillian dimension exceeds the dense-solver guard (D^2 > 4096); "
            "reduce the Fock truncation");

    // Replace the row of vec index of element (0,0) with the trace functional.
    ComplexMatrix m = l.matrix;
    ComplexVector b(n);
    const std::size_t row = 0;
    for (std::size_t j = 0; j < n; ++j) m(row, j) = 0.0;
    for (std::size_t i = 0; i < d; ++i) m(row, i * d + i) = 1.0;
    b[row] = 1.0;

    const ComplexVector x = solve_linear(m, b);

    double res = 0.0;
    {
        const ComplexVector lx = l.matrix.apply(x);
        res = lx.norm() / std::max(l.fro_norm, 1e-300);
    }

    DensityMatrix rho = hermitize_and_normalize(unvectorize(x, d));
    const EigResult eig = eig_hermitian(rho.rho);
    if (eig.values.front() < lindblad_tol::positivity_error_floor)
        throw PositivityViolationError(
            "steady_state: negative eigenvalue beyond tolerance; truncation too small");
    return {std::move(rho), res};
}

DensityMatrix steady_state(const Liouvillian& l) { return steady_state_full(l).rho; }

double steady_state_residual(const Liouvillian& l, const DensityMatrix& rho) {
    if (rho.dim() != l.dim) throw DimensionMismatchError("steady_state_residual: dim mismatch");
    const ComplexVector lx = l.matrix.apply(vectorize(rho.rho));
    return lx.norm() / std::max(l.fro_norm, 1e-300);
}

// One RK4 step as a matrix: Phi(dt L) = I + A + A^2/2 + A^3/6 + A^4/24.
static ComplexMatrix rk4_step_matrix(const ComplexMatrix& l, double dt) {
    const std::size_t n = l.rows;
    const ComplexMatrix a = complexd(dt) * l;
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a3 = a2 * a;
    const ComplexMatrix a4 = a2 * a2;
    ComplexMatrix phi = ComplexMatrix::identity(n);
    phi += a;
    phi += complexd(1.0 / 2.0) * a2;
    phi += complexd(1.0 / 6.0) * a3;
    phi += complexd(1.0 / 24.0) * a4;
    return phi;
}

static void rk4_step_inplace(const ComplexMatrix& l, ComplexVector& v, double dt,
                             ComplexVector& k1, ComplexVector& k2, ComplexVector& k3,
                             ComplexVector& k4, ComplexVector& tmp) {
    const std::size_t n = v.size();
    k1 = l.apply(v);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
    k2 = l.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
    k3 = l.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + dt * k3[i];
    k4 = l.apply(tmp);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        v[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final, double dt) {
    if (rho0.dim() != l.dim) throw DimensionMismatchError("evolve: state dimension mismatch");
    if (dt <= 0.0) throw InvalidParamsError("evolve: dt must be positive");
    if (t_final < 0.0) throw InvalidParamsError("evolve: t_final must be nonnegative");
    if (dt * l.fro_norm > lindblad_tol::step_heuristic)
        throw StepTooLargeError("evolve: dt * ||L|| exceeds the RK4 stability heuristic");
    if (t_final == 0.0) return rho0;

    const double steps_exact = t_final / dt;
    std::size_t n_steps = static_cast<std::size_t>(steps_exact);
    double remainder = t_final - static_cast<double>(n_steps) * dt;
    if (remainder < 1e-9 * dt) remainder = 0.0;

    ComplexVector v = vectorize(rho0.rho);

    // Past a few thousand steps the one-step map is applied through binary
    // powering of its matrix; the map itself is unchanged.
    constexpr std::size_t plain_loop_cap = 3000;
    if (n_steps <= plain_loop_cap) {
        const std::size_t n = v.size();
        ComplexVector k1(n), k2(n), k3(n), k4(n), tmp(n);
        for (std::size_t s = 0; s < n_steps; ++s)
            rk4_step_inplace(l.matrix, v, dt, k1, k2, k3, k4, tmp);
        if (remainder > 0.0) rk4_step_inplace(l.matrix, v, remainder, k1, k2, k3, k4, tmp);
    } else {
        ComplexMatrix base = rk4_step_matrix(l.matrix, dt);
        std::size_t k = n_steps;
        while (true) {
            if (k & 1u) v = base.apply(v);
            k >>= 1u;
            if (k == 0) break;
            base = base * base;
        }
        if (remainder > 0.0) {
            const std::size_t n = v.size();
            ComplexVector k1(n), k2(n), k3(n), k4(n), tmp(n);
            rk4_step_inplace(l.matrix, v, remainder, k1, k2, k3, k4, tmp);
        }
    }

    ComplexMatrix out = unvectorize(v, l.dim);
    double tr = 0.0;
    for (std::size_t i = 0; i < l.dim; ++i) tr += out(i, i).real();
    if (std::abs(tr - 1.0) > lindblad_tol::trace_drift)
        throw StepTooLargeError("evolve: trace drift exceeded tolerance over the run");
    return DensityMatrix{std::move(out)};
}

// Diagonal of rho restricted to photon number n, summed over the atom.
static double photon_diag(const DensityMatrix& rho, std::size_t n) {
    const std::size_t nf = rho.dim() / 2;
    double p = 0.0;
    p += rho.rho(n, n).real();
    p += rho.rho(nf + n, nf + n).real();
    return p;
}

double photon_number_dist(const DensityMatrix& rho, std::size_t n) {
    const std::size_t nf = rho.dim() / 2;
    if (n >= nf) throw InvalidParamsError("photon_number_dist: n exceeds truncation");
    return std::clamp(photon_diag(rho, n), 0.0, 1.0);
}

double mean_photon_number(const DensityMatrix& rho) {
    const std::size_t nf = rho.dim() / 2;
    double mean = 0.0;
    for (std::size_t n = 1; n < nf; ++n) mean += static_cast<double>(n) * photon_diag(rho, n);
    return mean;
}

double g2_zero(const DensityMatrix& rho) {
    const std::size_t nf = rho.dim() / 2;
    double num = 0.0;  // <a^dag2 a^2> = sum n(n-1) rho_nn
    double den = 0.0;  // <a^dag a>
    for (std::size_t n = 1; n < nf; ++n) {
        const double nd = static_cast<double>(n);
        const double p = photon_diag(rho, n);
        den += nd * p;
        num += nd * (nd - 1.0) * p;
    }
    if (den <= 1e-12) throw NoPhotonsError("g2_zero: mean photon number vanishes");
    return std::max(num, 0.0) / (den * den);
}

double g2_weak_drive_estimate(const DensityMatrix& rho) {
    const double p1 = photon_number_dist(rho, 1);
    const double p2 = photon_number_dist(rho, 2);
    if (p1 <= 1e-12) throw NoPhotonsError("g2_weak_drive_estimate: P_1 vanishes");
    return 2.0 * p2 / (p1 * p1);
}

double trace_norm_diff(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("trace_norm_diff: dim mismatch");
    const EigResult eig = eig_hermitian(a.rho - b.rho);
    double s = 0.0;
    for (double v : eig.values) s += std::abs(v);
    return s;
}

}  // namespace blockade
