#include "blockade/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

namespace blockade {

namespace {

// Runs body(i) for i in [0, count) across workers; any index is computed by
// exactly one thread from immutable inputs, so results match the serial order.
template <typename F>
void parallel_for(std::size_t count, unsigned n_threads, F&& body) {
    unsigned workers = n_threads == 0 ? std::thread::hardware_concurrency() : n_threads;
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void append_flag(std::string& flag, const char* token) {
    if (!flag.empty()) flag += ';';
    flag += token;
}

bool known_branch(const std::string& b) {
    return b == "d1" || b == "d2" || b == "d3" || b == "d4";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

double axis_value(const AxisSpec& axis, std::size_t i) {
    return axis.start + (axis.stop - axis.start) * static_cast<double>(i) /
                            static_cast<double>(axis.points - 1);
}

void validate(const SweepSpec& spec) {
    if (spec.axis.points < 2) throw InvalidParamsError("sweep: need at least 2 axis points");
    if (!(spec.axis.start < spec.axis.stop))
        throw InvalidParamsError("sweep: axis start must be below stop");
    validate(spec.fixed);
    validate(spec.truncation);
    if (spec.kind == SweepKind::omega_ratio || spec.kind == SweepKind::chi_ratio) {
        if (spec.resonance_branch.empty())
            throw InvalidParamsError("sweep: omega/chi sweeps require a resonance branch");
        if (!known_branch(spec.resonance_branch))
            throw InvalidParamsError("sweep: unknown resonance branch '" + spec.resonance_branch +
                                     "' (expected d1..d4)");
    }
    if (spec.kind == SweepKind::fidelity) {
        if (spec.axis.start != 0.0)
            throw InvalidParamsError("sweep: fidelity trajectories start at chi t = 0");
        if (spec.fixed.chi <= 0.0)
            throw InvalidParamsError("sweep: fidelity recipe requires chi > 0");
        if (spec.g_over_delta_values.empty())
            throw InvalidParamsError("sweep: fidelity sweep needs at least one g/Delta value");
        for (double r : spec.g_over_delta_values)
            if (r <= 0.0) throw InvalidParamsError("sweep: g/Delta values must be positive");
    }
}

SweepRow steady_point(const ModelParams& p, const FockTruncation& t, double axis) {
    SweepRow row;
    row.axis = axis;
    try {
        const Liouvillian l = model_liouvillian(p, t);
        const SteadySolution sol = steady_state_full(l);
        row.residual = sol.residual;
        row.p0 = photon_number_dist(sol.rho, 0);
        row.p1 = photon_number_dist(sol.rho, 1);
        row.p2 = photon_number_dist(sol.rho, 2);
        row.mean_n = mean_photon_number(sol.rho);
        if (sol.residual > lindblad_tol::steady_residual_rel) append_flag(row.flag, "residual");
        try {
            row.g2 = g2_zero(sol.rho);
        } catch (const NoPhotonsError&) {
            append_flag(row.flag, "no_photons");
        }
        try {
            row.g2_weak = g2_weak_drive_estimate(sol.rho);
        } catch (const NoPhotonsError&) {
            if (row.flag.find("no_photons") == std::string::npos)
                append_flag(row.flag, "no_photons");
        }
    } catch (const SingularError&) {
        append_flag(row.flag, "singular");
    } catch (const PositivityViolationError&) {
        append_flag(row.flag, "positivity");
    } catch (const ZeroChiError&) {
        append_flag(row.flag, "zero_chi");
    }
    return row;
}

std::vector<SweepRow> run_detuning_sweep(const SweepSpec& spec, unsigned n_threads) {
    validate(spec);
    if (spec.kind != SweepKind::detuning)
        throw InvalidParamsError("run_detuning_sweep: spec kind mismatch");
    std::vector<SweepRow> rows(spec.axis.points);
    parallel_for(spec.axis.points, n_threads, [&](std::size_t i) {
        const double dc = axis_value(spec.axis, i);
        ModelParams p = spec.fixed;
        p.delta_c = dc;
        p.delta_c_prime = dc;  // steady-state observables depend on Delta_c only
        rows[i] = steady_point(p, spec.truncation, dc);
    });
    return rows;
}

std::vector<SweepRow> run_omega_sweep(const SweepSpec& spec, unsigned n_threads) {
    validate(spec);
    if (spec.kind != SweepKind::omega_ratio)
        throw InvalidParamsError("run_omega_sweep: spec kind mismatch");
    std::vector<SweepRow> rows(spec.axis.points);
    parallel_for(spec.axis.points, n_threads, [&](std::size_t i) {
        const double ratio = axis_value(spec.axis, i);
        ModelParams p = spec.fixed;
        p.omega_r = ratio * p.chi;
        try {
            p.delta_c = resonance_value(p, spec.resonance_branch);
            p.delta_c_prime = p.delta_c;
            rows[i] = steady_point(p, spec.truncation, ratio);
        } catch (const ZeroChiError&) {
            rows[i].axis = ratio;
            rows[i].flag = "zero_chi";
        }
    });
    return rows;
}

std::vector<SweepRow> run_chi_sweep(const SweepSpec& spec, unsigned n_threads) {
    validate(spec);
    if (spec.kind != SweepKind::chi_ratio)
        throw InvalidParamsError("run_chi_sweep: spec kind mismatch");
    if (spec.fixed.chi == 0.0)
        throw ZeroChiError("run_chi_sweep: fixed chi must be nonzero (it pins Omega_R/chi)");
    const double omega_ratio = spec.fixed.omega_r / spec.fixed.chi;
    std::vector<SweepRow> rows(spec.axis.points);
    parallel_for(spec.axis.points, n_threads, [&](std::size_t i) {
        const double chi = axis_value(spec.axis, i);
        ModelParams p = spec.fixed;
        p.chi = chi;
        p.omega_r = omega_ratio * chi;
        try {
            p.delta_c = resonance_value(p, spec.resonance_branch);
            p.delta_c_prime = p.delta_c;
            rows[i] = steady_point(p, spec.truncation, chi);
        } catch (const ZeroChiError&) {
            rows[i].axis = chi;
            rows[i].flag = "zero_chi";
        }
    });
    return rows;
}

std::vector<FidelityRow> run_fidelity_sweep(const SweepSpec& spec, unsigned n_threads) {
    validate(spec);
    if (spec.kind != SweepKind::fidelity)
        throw InvalidParamsError("run_fidelity_sweep: spec kind mismatch");

    const std::size_t n_ratios = spec.g_over_delta_values.size();
    std::vector<FidelityTrajectory> result(n_ratios);
    parallel_for(n_ratios, n_threads, [&](std::size_t i) {
        const double r = spec.g_over_delta_values[i];
        ModelParams p = spec.fixed;
        const ValidityParams base = make_validity_params(p, r);
        p.delta_c_prime = p.delta_0 - p.chi - base.detuning();
        result[i] = fidelity_trajectory(make_validity_params(p, r), spec.axis.stop,
                                        spec.axis.points, spec.truncation);
    });

    std::vector<FidelityRow> rows;
    rows.reserve(n_ratios * spec.axis.points);
    for (std::size_t i = 0; i < n_ratios; ++i)
        for (const auto& pt : result[i].points)
            rows.push_back({spec.g_over_delta_values[i], pt.chi_t, pt.f});
    return rows;
}

bool any_solver_failure(const std::vector<SweepRow>& rows) {
    for (const auto& row : rows) {
        if (row.flag.empty()) continue;
        if (row.flag.find("singular") != std::string::npos ||
            row.flag.find("positivity") != std::string::npos ||
            row.flag.find("residual") != std::string::npos ||
            row.flag.find("zero_chi") != std::string::npos)
            return true;
    }
    return false;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis,p0,p1,p2,mean_n,g2,g2_weak,residual,flag\n";
    for (const auto& r : rows) {
        out += fmt(r.axis);
        out += ',';
        out += fmt(r.p0);
        out += ',';
        out += fmt(r.p1);
        out += ',';
        out += fmt(r.p2);
        out += ',';
        out += fmt(r.mean_n);
        out += ',';
        out += fmt(r.g2);
        out += ',';
        out += fmt(r.g2_weak);
        out += ',';
        out += fmt(r.residual);
        out += ',';
        out += r.flag;
        out += '\n';
    }
    return out;
}

std::string fidelity_csv(const std::vector<FidelityRow>& rows) {
    std::string out = "g_over_delta,chi_t,fidelity\n";
    for (const auto& r : rows) {
        out += fmt(r.g_over_delta);
        out += ',';
        out += fmt(r.chi_t);
        out += ',';
        out += fmt(r.f);
        out += '\n';
    }
    return out;
}

std::string resonance_csv(const std::vector<ResonanceEntry>& entries) {
    std::string out = "label,transition,delta_c\n";
    for (const auto& e : entries) {
        out += e.label;
        out += ',';
        out += e.transition;
        out += ',';
        out += fmt(e.delta_c);
        out += '\n';
    }
    return out;
}

std::string spectrum_csv(const std::vector<EigenPair>& pairs) {
    std::string out = "m,branch,energy,theta\n";
    for (const auto& p : pairs) {
        out += std::to_string(p.m);
        out += ',';
        out += branch_name(p.branch);
        out += ',';
        out += fmt(p.energy);
        out += ',';
        out += fmt(p.theta_m);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_file: cannot open '" + path + "'");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error("write_file: short write to '" + path + "'");
}

}  // namespace blockade
