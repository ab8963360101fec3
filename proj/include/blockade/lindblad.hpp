#pragma once

// Liouvillian superoperator for the Lindblad master equation
//   rho_dot = i[rho, H] + sum_k (rate_k/2)(2 C rho C^dag - C^dag C rho - rho C^dag C),
// its steady state, time evolution, and the cavity-field observables
// P_n, <a^dag a> and g2(0).

#include <cstddef>
#include <vector>

#include "blockade/linop.hpp"
#include "blockade/model.hpp"

namespace blockade {

namespace lindblad_tol {
inline constexpr double density_hermiticity = 1e-9;
inline constexpr double density_trace = 1e-9;
inline constexpr double density_eig_floor = -1e-8;     // numerical positivity
inline constexpr double positivity_error_floor = -1e-6;  // hard failure (truncation too small)
inline constexpr double steady_residual_rel = 1e-8;    // ||L vec(rho)|| vs ||L||_F
inline constexpr double step_heuristic = 0.1;          // dt * ||L||_F cap for RK4
inline constexpr double trace_drift = 1e-7;            // allowed over an evolve run
inline constexpr std::size_t max_liouville_dim = 4096;  // refuse dense solves past D^2
inline constexpr std::size_t default_n_max = 12;       // adequate for eta/kappa <= 0.2
}  // namespace lindblad_tol

// Trace-one Hermitian positive-semidefinite state on the joint space.
struct DensityMatrix {
    ComplexMatrix rho;

    std::size_t dim() const { return rho.rows; }
};

// |idx><idx| on a dim-dimensional space.
DensityMatrix basis_density(std::size_t idx, std::size_t dim);

// Checks Hermiticity, unit trace and numerical positivity; throws
// InvalidParamsError when an invariant is violated.
void validate_density(const DensityMatrix& rho,
                      double herm_tol = lindblad_tol::density_hermiticity,
                      double trace_tol = lindblad_tol::density_trace,
                      double eig_floor = lindblad_tol::density_eig_floor);

struct CollapseOp {
    double rate = 0.0;
    ComplexMatrix op;
};

// Superoperator on column-stacked rho: vec index j*D + i holds rho(i,j).
struct Liouvillian {
    std::size_t dim = 0;   // Hilbert-space dimension D; matrix is D^2 x D^2
    ComplexMatrix matrix;
    double fro_norm = 0.0;  // cached ||L||_F, the scale for residual/step bounds
};

ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim);

// L = -i(I (x) H - H^T (x) I)
//     + sum_k (rate_k/2)(2 conj(C_k) (x) C_k - I (x) C_k^dag C_k - (C_k^dag C_k)^T (x) I)
Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<CollapseOp>& collapse_ops);

// Model rig: H_full plus the two vacuum-bath dissipators (kappa, a), (gamma, sigma_-).
Liouvillian model_liouvillian(const ModelParams& p, const FockTruncation& t);

struct SteadySolution {
    DensityMatrix rho;
    double residual = 0.0;  // ||L vec(rho_raw)||_2 / ||L||_F before hermitization
};

// Steady state via the trace-replaced linear system: the row of the vec index
// of element (0,0) becomes the trace functional with rhs 1, the solution is
// hermitized and trace-renormalized. Throws SingularError,
// PositivityViolationError, InvalidParamsError (dimension guard).
SteadySolution steady_state_full(const Liouvillian& l);
DensityMatrix steady_state(const Liouvillian& l);

// Residual of an arbitrary candidate state against this Liouvillian.
double steady_state_residual(const Liouvillian& l, const DensityMatrix& rho);

// Fixed-step RK4 on vec(rho_dot) = L vec(rho). Long runs evaluate the same
// one-step linear map through binary powering of its matrix. Preconditions:
// dt > 0 and dt * ||L||_F <= step_heuristic (else StepTooLargeError).
DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final, double dt);

// P_n summed over the atomic factor, clamped to [0,1].
double photon_number_dist(const DensityMatrix& rho, std::size_t n);
double mean_photon_number(const DensityMatrix& rho);

// g2(0) = Tr(a^dag2 a^2 rho) / Tr(a^dag a rho)^2; NoPhotonsError when
// <a^dag a> <= 1e-12.
double g2_zero(const DensityMatrix& rho);

// Weak-drive estimate 2 P_2 / P_1^2; NoPhotonsError when P_1 <= 1e-12.
double g2_weak_drive_estimate(const DensityMatrix& rho);

// Trace norm of the difference, sum of |eigenvalues|.
double trace_norm_diff(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace blockade
