#pragma once

// Parameter-sweep engine behind the CLI: steady-state observables per grid
// point (optionally fanned out across worker threads with deterministic,
// order-stable output), fidelity trajectories, and the CSV renderers.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "blockade/lindblad.hpp"
#include "blockade/model.hpp"
#include "blockade/validity.hpp"

namespace blockade {

enum class SweepKind { detuning, omega_ratio, chi_ratio, fidelity };

struct AxisSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
};

double axis_value(const AxisSpec& axis, std::size_t i);

struct SweepSpec {
    SweepKind kind = SweepKind::detuning;
    AxisSpec axis;
    ModelParams fixed;
    std::string resonance_branch;  // d1..d4; required for omega/chi sweeps
    FockTruncation truncation{lindblad_tol::default_n_max};
    std::string output_path;
    std::vector<double> g_over_delta_values{0.05, 0.1, 0.2, 0.3};  // fidelity kind
};

// Throws InvalidParamsError on malformed specs (points < 2, start >= stop,
// missing/unknown branch where required, bad fixed parameters).
void validate(const SweepSpec& spec);

struct SweepRow {
    double axis = 0.0;
    std::optional<double> p0, p1, p2, mean_n, g2, g2_weak, residual;
    std::string flag;  // empty when the row passed every check
};

// One steady-state evaluation; solver errors become row flags instead of
// exceptions so sweeps continue past bad points.
SweepRow steady_point(const ModelParams& p, const FockTruncation& t, double axis);

std::vector<SweepRow> run_detuning_sweep(const SweepSpec& spec, unsigned n_threads = 0);
std::vector<SweepRow> run_omega_sweep(const SweepSpec& spec, unsigned n_threads = 0);
std::vector<SweepRow> run_chi_sweep(const SweepSpec& spec, unsigned n_threads = 0);

struct FidelityRow {
    double g_over_delta = 0.0;
    double chi_t = 0.0;
    double f = 0.0;
};

// Fig-6-style recipe: per ratio r, Delta = chi/r^2 and
// Delta'_c = Delta_0 - chi - Delta; initial state (1/sqrt2)|alpha>(|e>+|g>).
std::vector<FidelityRow> run_fidelity_sweep(const SweepSpec& spec, unsigned n_threads = 0);

// True when any row carries a solver-failure flag (singular/positivity/
// residual/zero_chi); a bare no_photons row is an expected physical sentinel.
bool any_solver_failure(const std::vector<SweepRow>& rows);

// CSV renderers. Numbers are printed with 17 significant digits in
// scientific notation; optional fields render empty. One header row,
// '\n' line endings, byte-stable for identical inputs.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string fidelity_csv(const std::vector<FidelityRow>& rows);
std::string resonance_csv(const std::vector<ResonanceEntry>& entries);
std::string spectrum_csv(const std::vector<EigenPair>& pairs);

void write_file(const std::string& path, const std::string& contents);

}  // namespace blockade
