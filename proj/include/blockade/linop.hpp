#pragma once

// Dense complex linear algebra: Kronecker products, Hermitian
// eigendecomposition (cyclic Jacobi) and LU solves with partial pivoting.
// Everything is plain value types; all operations are pure functions.

#include <complex>
#include <cstddef>
#include <vector>

#include "blockade/errors.hpp"

namespace blockade {

using complexd = std::complex<double>;

// Numeric tolerances for this module, adjustable in one place.
namespace linop_tol {
inline constexpr double hermiticity = 1e-10;     // max abs deviation of h - h^dag
inline constexpr double jacobi_offdiag = 1e-14;  // stop threshold vs ||h||_F
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double singular_pivot = 1e-13;  // pivot floor vs ||m||_F
}  // namespace linop_tol

struct ComplexVector {
    std::vector<complexd> data;

    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : data(n) {}

    std::size_t size() const { return data.size(); }
    complexd& operator[](std::size_t i) { return data[i]; }
    const complexd& operator[](std::size_t i) const { return data[i]; }

    double norm() const;
};

// Row-major dense complex matrix.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<complexd> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    static ComplexMatrix identity(std::size_t n);

    complexd& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const complexd& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;

    double frobenius_norm() const;
    double max_abs() const;

    // max abs deviation from Hermiticity, max_ij |a_ij - conj(a_ji)|
    double hermiticity_error() const;

    ComplexVector apply(const ComplexVector& v) const;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(complexd s, const ComplexMatrix& a);
ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix& operator-=(ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Standard Kronecker product; result is (a.rows*b.rows) x (a.cols*b.cols).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

// Hermitian eigendecomposition via cyclic Jacobi rotations. Eigenvector
// phases are fixed so the largest-magnitude component of each column is
// real and nonnegative (ties broken by lowest index).
// Throws NotHermitianError, NoConvergenceError.
EigResult eig_hermitian(const ComplexMatrix& h);

// Solves m x = rhs via LU with partial pivoting. Throws SingularError when a
// pivot falls below linop_tol::singular_pivot * ||m||_F, DimensionMismatchError
// on shape errors.
ComplexVector solve_linear(const ComplexMatrix& m, const ComplexVector& rhs);

}  // namespace blockade
