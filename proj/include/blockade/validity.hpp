#pragma once

// Closed-system check of the dispersive approximation: probability-amplitude
// equations of motion for the effective Hamiltonian (with its conditional
// ladder terms) and for the plain driven dispersive Hamiltonian, fixed-step
// RK4 integration, and the fidelity between the two evolved states.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "blockade/model.hpp"

namespace blockade {

namespace validity_tol {
inline constexpr double norm_drift = 1e-7;        // allowed |norm^2 - 1| over a run
inline constexpr double step_accuracy = 0.05;     // dt * frequency scale cap
inline constexpr double dt_prefactor = 1e-3;      // target dt * frequency scale
inline constexpr double poisson_tail = 1e-10;     // coherent-state truncation budget
inline constexpr double max_steps_per_run = 1.5e6;  // dt floor for very stiff recipes
}  // namespace validity_tol

// Amplitudes {A_n (excited), B_n (ground)}, n = 0..n_max.
struct AmplitudeState {
    std::vector<complexd> excited;
    std::vector<complexd> ground;

    std::size_t n_max() const { return excited.size() - 1; }
};

double state_norm_sq(const AmplitudeState& s);

// |<psi|phi>|^2, clamped to [0, 1]. Throws DimensionMismatchError.
double fidelity(const AmplitudeState& psi, const AmplitudeState& phi);

// The dispersive ratio g/Delta plus the embedded model parameters; the
// coupling and detuning follow from chi = g^2/Delta.
struct ValidityParams {
    ModelParams model;
    double g_over_delta = 0.0;

    double detuning() const;  // Delta = chi / (g/Delta)^2
    double coupling() const;  // g = chi / (g/Delta)
};

// Validates chi > 0 (when g_over_delta != 0) and g_over_delta >= 0.
ValidityParams make_validity_params(ModelParams model, double g_over_delta);

// Equations of motion for the effective Hamiltonian: per photon sector the
// sigma_x coupling plus the conditional ladder terms with opposite signs in
// the excited and ground sectors. Boundary convention: amplitudes with
// n = -1 or n = n_max+1 are zero.
AmplitudeState amp_derivs_eff(const AmplitudeState& s, const ValidityParams& p);

// Same without the ladder terms; each photon sector is a closed 2x2 block.
AmplitudeState amp_derivs_ddjc(const AmplitudeState& s, const ModelParams& p);

enum class DerivKind { eff, ddjc };

// The frequency scale used for step-size control and the RK4 accuracy guard:
// max(|Delta'_c| N, Omega_R, |Delta_0| + 2 N chi).
double amp_frequency_scale(const ModelParams& p, std::size_t n_max);

// Fixed-step RK4 over [0, t_final]. The trajectory contains the initial
// state and every sample_stride-th step thereafter (stride 1 records every
// step). Preconditions: dt > 0 and dt * frequency scale <= step_accuracy.
std::vector<AmplitudeState> integrate_amps(DerivKind kind, const AmplitudeState& initial,
                                           const ValidityParams& p, double t_final, double dt,
                                           std::size_t sample_stride = 1);

// (1/sqrt(2)) |alpha> (|e> + |g>): A_n = B_n = coherent weights, renormalized
// after truncation. Throws TruncationTooSmallError when the retained Poisson
// weight falls below 1 - poisson_tail.
AmplitudeState coherent_initial_state(complexd alpha, const FockTruncation& t);

struct FidelityPoint {
    double chi_t = 0.0;
    double f = 0.0;
};

struct FidelityTrajectory {
    double g_over_delta = 0.0;
    std::vector<FidelityPoint> points;
    double max_norm_drift = 0.0;  // worst |norm^2 - 1| across both states
};

// Lockstep integration of both states from the shared coherent initial state,
// sampling F(t) at `samples` evenly spaced times over chi t in [0, chi_t_final].
// The step size follows dt_prefactor / frequency scale with a floor capping
// the total step count.
FidelityTrajectory fidelity_trajectory(const ValidityParams& p, double chi_t_final,
                                       std::size_t samples, const FockTruncation& t,
                                       complexd alpha = complexd(1.0, 0.0));

}  // namespace blockade
