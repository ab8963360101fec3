#pragma once

// Physical parameter set, rotating-frame Hamiltonians on the truncated
// atom (x) field space, and the closed-form spectrum / resonance conditions
// of the driven dispersive Jaynes-Cummings model.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "blockade/linop.hpp"

namespace blockade {

// All frequencies are stored as multiples of the cavity decay rate kappa,
// which is the unit of frequency throughout (kappa == 1).
struct ModelParams {
    double delta_c = 0.0;        // cavity-drive detuning Delta_c
    double delta_c_prime = 0.0;  // cavity vs atom-drive detuning Delta'_c
    double delta_0 = 0.0;        // shifted atomic detuning Delta_0
    double chi = 0.0;            // dispersive coupling strength
    double omega_r = 0.0;        // atomic drive strength Omega_R
    double eta = 0.0;            // cavity drive strength
    double kappa = 1.0;          // cavity decay rate; fixed to 1
    double gamma = 0.0;          // atomic decay rate
};

// Throws InvalidParamsError (kappa != 1, negative rates or drives).
void validate(const ModelParams& p);

// Photon-number cutoff N; joint dimension is 2(N+1).
struct FockTruncation {
    std::size_t n_max = 12;

    std::size_t fock_dim() const { return n_max + 1; }
    std::size_t joint_dim() const { return 2 * (n_max + 1); }
};

// Throws InvalidParamsError (n_max < 2: two-photon statistics need n=2).
void validate(const FockTruncation& t);

enum class Branch { plus, minus };
inline const char* branch_name(Branch b) { return b == Branch::plus ? "+" : "-"; }

struct EigenPair {
    std::size_t m = 0;
    Branch branch = Branch::plus;
    double energy = 0.0;   // E_{m,+-}
    double theta_m = 0.0;  // mixing angle, radians
};

// Tensor ordering: atom factor first with basis {|e>, |g>} (sigma_z =
// diag(1,-1)), then Fock index ascending. atom = 0 for |e>, 1 for |g>.
inline std::size_t joint_index(std::size_t atom, std::size_t n, const FockTruncation& t) {
    return atom * t.fock_dim() + n;
}

ComplexMatrix fock_annihilation(const FockTruncation& t);  // a on the field factor
ComplexMatrix fock_number(const FockTruncation& t);        // a^dag a
ComplexMatrix atom_sigma_x();
ComplexMatrix atom_sigma_z();
ComplexMatrix atom_sigma_minus();
ComplexMatrix joint_annihilation(const FockTruncation& t);  // I_2 (x) a
ComplexMatrix joint_sigma_minus(const FockTruncation& t);   // sigma_- (x) I

// Undriven rotating-frame Hamiltonian:
//   Delta'_c a^dag a + (Delta_0/2) sigma_z + chi a^dag a sigma_z + (Omega_R/2) sigma_x
ComplexMatrix build_h_ddjc(const ModelParams& p, const FockTruncation& t);

// Adds the cavity drive and swaps Delta'_c for Delta_c:
//   Delta_c a^dag a + (Delta_0/2) sigma_z + (Omega_R/2) sigma_x
//   + chi a^dag a sigma_z + eta (a^dag + a)
ComplexMatrix build_h_full(const ModelParams& p, const FockTruncation& t);

// Effective Hamiltonian with the conditional-drive correction
//   (Omega_R/2)(g/Delta) sigma_z (a^dag + a) appended to build_h_ddjc.
ComplexMatrix build_h_eff(const ModelParams& p, const FockTruncation& t, double g_over_delta);

// Mixing angle theta_m with 2 theta_m = atan2(Omega_R, Delta_0 + 2 m chi).
double mixing_angle(const ModelParams& p, std::size_t m);

// E_{m,+-} = m Delta'_c +- (1/2) sqrt((Delta_0 + 2 m chi)^2 + Omega_R^2)
double eigen_energy(const ModelParams& p, std::size_t m, Branch b);

// 2(m_max+1) pairs, m = 0..m_max, both branches per m.
std::vector<EigenPair> analytic_spectrum(const ModelParams& p, std::size_t m_max);

// |eps_{m,+}> and |eps_{m,->}> = |m>_a |+-(m)> embedded in the joint space.
std::pair<ComplexVector, ComplexVector> dressed_states(const ModelParams& p, std::size_t m,
                                                       const FockTruncation& t);

struct ResonanceEntry {
    std::string label;       // d1..d4 single-photon, p1..p4 two-photon
    std::string transition;  // e.g. "|eps_{0,-}> -> |eps_{1,-}>"
    double delta_c = 0.0;
};

// The eight resonance detunings Delta^{1,+-}_{0,+-} and Delta^{2,+-}_{0,+-}.
// Labels follow the four single-photon transition cases in order
// (0,-)->(1,+), (0,-)->(1,-), (0,+)->(1,+), (0,+)->(1,-), and likewise for
// the two-photon set. Throws ZeroChiError when chi == 0.
std::vector<ResonanceEntry> resonance_detunings(const ModelParams& p);

// Lookup of a single labeled detuning ("d1".."d4", "p1".."p4").
double resonance_value(const ModelParams& p, const std::string& label);

}  // namespace blockade
