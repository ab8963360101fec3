#include "blockade/validity.hpp"

#include <algorithm>
#include <cmath>

namespace blockade {

double state_norm_sq(const AmplitudeState& s) {
    double acc = 0.0;
    for (const auto& z : s.excited) acc += std::norm(z);
    for (const auto& z : s.ground) acc += std::norm(z);
    return acc;
}

double fidelity(const AmplitudeState& psi, const AmplitudeState& phi) {
    if (psi.excited.size() != phi.excited.size())
        throw DimensionMismatchError("fidelity: truncation mismatch");
    complexd overlap = 0.0;
    for (std::size_t n = 0; n < psi.excited.size(); ++n) {
        overlap += std::conj(psi.excited[n]) * phi.excited[n];
        overlap += std::conj(psi.ground[n]) * phi.ground[n];
    }
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

double ValidityParams::detuning() const { return model.chi / (g_over_delta * g_over_delta); }

double ValidityParams::coupling() const { return model.chi / g_over_delta; }

ValidityParams make_validity_params(ModelParams model, double g_over_delta) {
    validate(model);
    if (g_over_delta < 0.0)
        throw InvalidParamsError("ValidityParams: g_over_delta must be >= 0");
    if (g_over_delta != 0.0 && model.chi <= 0.0)
        throw InvalidParamsError("ValidityParams: chi must be positive (chi = g^2/Delta)");
    return ValidityParams{model, g_over_delta};
}

// Per-sector coefficients cached outside the integration loop.
namespace {

struct DerivTables {
    std::vector<double> diag_e;  // n Delta'_c + Delta_0/2 + n chi
    std::vector<double> diag_g;  // n Delta'_c - Delta_0/2 - n chi
    std::vector<double> lad;     // lad[n] = sqrt(n+1)
    double half_omega = 0.0;
    double ladder = 0.0;  // (Omega_R/2)(g/Delta); zero for the ddjc equations

    DerivTables(const ModelParams& p, double g_over_delta, std::size_t n_max) {
        const std::size_t d = n_max + 1;
        diag_e.resize(d);
        diag_g.resize(d);
        lad.resize(d);
        for (std::size_t n = 0; n < d; ++n) {
            const double nd = static_cast<double>(n);
            diag_e[n] = nd * p.delta_c_prime + 0.5 * p.delta_0 + nd * p.chi;
            diag_g[n] = nd * p.delta_c_prime - 0.5 * p.delta_0 - nd * p.chi;
            lad[n] = std::sqrt(nd + 1.0);
        }
        half_omega = 0.5 * p.omega_r;
        ladder = 0.5 * p.omega_r * g_over_delta;
    }

    void eval(const AmplitudeState& s, AmplitudeState& out) const {
        const std::size_t d = diag_e.size();
        const complexd mi(0.0, -1.0);
        for (std::size_t n = 0; n < d; ++n) {
            complexd up = diag_e[n] * s.excited[n] + half_omega * s.ground[n];
            complexd dn = diag_g[n] * s.ground[n] + half_omega * s.excited[n];
            if (ladder != 0.0) {
                complexd hop_e = 0.0;
                complexd hop_g = 0.0;
                if (n > 0) {
                    hop_e += lad[n - 1] * s.excited[n - 1];
                    hop_g += lad[n - 1] * s.ground[n - 1];
                }
                if (n + 1 < d) {
                    hop_e += lad[n] * s.excited[n + 1];
                    hop_g += lad[n] * s.ground[n + 1];
                }
                up += ladder * hop_e;
                dn -= ladder * hop_g;
            }
            out.excited[n] = mi * up;
            out.ground[n] = mi * dn;
        }
    }
};

struct Rk4Buffers {
    AmplitudeState k1, k2, k3, k4, tmp;

    explicit Rk4Buffers(std::size_t d) {
        for (AmplitudeState* s : {&k1, &k2, &k3, &k4, &tmp}) {
            s->excited.assign(d, 0.0);
            s->ground.assign(d, 0.0);
        }
    }
};

void axpy(const AmplitudeState& y, double a, const AmplitudeState& x, AmplitudeState& out) {
    for (std::size_t n = 0; n < y.excited.size(); ++n) {
        out.excited[n] = y.excited[n] + a * x.excited[n];
        out.ground[n] = y.ground[n] + a * x.ground[n];
    }
}

void rk4_step(const DerivTables& deriv, AmplitudeState& y, double dt, Rk4Buffers& b) {
    deriv.eval(y, b.k1);
    axpy(y, 0.5 * dt, b.k1, b.tmp);
    deriv.eval(b.tmp, b.k2);
    axpy(y, 0.5 * dt, b.k2, b.tmp);
    deriv.eval(b.tmp, b.k3);
    axpy(y, dt, b.k3, b.tmp);
    deriv.eval(b.tmp, b.k4);
    const double w = dt / 6.0;
    for (std::size_t n = 0; n < y.excited.size(); ++n) {
        y.excited[n] += w * (b.k1.excited[n] + 2.0 * b.k2.excited[n] + 2.0 * b.k3.excited[n] +
                             b.k4.excited[n]);
        y.ground[n] += w * (b.k1.ground[n] + 2.0 * b.k2.ground[n] + 2.0 * b.k3.ground[n] +
                            b.k4.ground[n]);
    }
}

}  // namespace

AmplitudeState amp_derivs_eff(const AmplitudeState& s, const ValidityParams& p) {
    DerivTables tables(p.model, p.g_over_delta, s.n_max());
    AmplitudeState out{std::vector<complexd>(s.excited.size()),
                       std::vector<complexd>(s.ground.size())};
    tables.eval(s, out);
    return out;
}

AmplitudeState amp_derivs_ddjc(const AmplitudeState& s, const ModelParams& p) {
    DerivTables tables(p, 0.0, s.n_max());
    AmplitudeState out{std::vector<complexd>(s.excited.size()),
                       std::vector<complexd>(s.ground.size())};
    tables.eval(s, out);
    return out;
}

double amp_frequency_scale(const ModelParams& p, std::size_t n_max) {
    const double nd = static_cast<double>(n_max);
    return std::max({std::abs(p.delta_c_prime) * nd, p.omega_r,
                     std::abs(p.delta_0) + 2.0 * nd * std::abs(p.chi), 1.0});
}

std::vector<AmplitudeState> integrate_amps(DerivKind kind, const AmplitudeState& initial,
                                           const ValidityParams& p, double t_final, double dt,
                                           std::size_t sample_stride) {
    if (dt <= 0.0) throw InvalidParamsError("integrate_amps: dt must be positive");
    if (t_final < 0.0) throw InvalidParamsError("integrate_amps: t_final must be nonnegative");
    if (sample_stride == 0) throw InvalidParamsError("integrate_amps: stride must be >= 1");
    const double scale = amp_frequency_scale(p.model, initial.n_max());
    if (dt * scale > validity_tol::step_accuracy)
        throw StepTooLargeError("integrate_amps: dt * frequency scale exceeds accuracy cap");

    const double ratio = kind == DerivKind::eff ? p.g_over_delta : 0.0;
    DerivTables tables(p.model, ratio, initial.n_max());
    Rk4Buffers buffers(initial.excited.size());

    std::vector<AmplitudeState> trajectory;
    trajectory.push_back(initial);
    if (t_final == 0.0) return trajectory;

    AmplitudeState y = initial;
    std::size_t n_steps = static_cast<std::size_t>(t_final / dt);
    double remainder = t_final - static_cast<double>(n_steps) * dt;
    if (remainder < 1e-9 * dt) remainder = 0.0;

    bool final_recorded = false;
    for (std::size_t s = 1; s <= n_steps; ++s) {
        rk4_step(tables, y, dt, buffers);
        if (s % sample_stride == 0) {
            trajectory.push_back(y);
            final_recorded = s == n_steps;
        }
    }
    if (remainder > 0.0) {
        rk4_step(tables, y, remainder, buffers);
        final_recorded = false;
    }
    // the state at t_final always closes the trajectory
    if (!final_recorded) trajectory.push_back(y);
    return trajectory;
}

AmplitudeState coherent_initial_state(complexd alpha, const FockTruncation& t) {
    validate(t);
    const std::size_t d = t.fock_dim();
    const double mu = std::norm(alpha);

    std::vector<complexd> weights(d);
    weights[0] = std::exp(-0.5 * mu);
    for (std::size_t n = 1; n < d; ++n)
        weights[n] = weights[n - 1] * alpha / std::sqrt(static_cast<double>(n));

    double retained = 0.0;
    for (const auto& w : weights) retained += std::norm(w);
    if (retained < 1.0 - validity_tol::poisson_tail)
        throw TruncationTooSmallError(
            "coherent_initial_state: Poisson tail beyond the truncation exceeds budget");

    const double scale = 1.0 / std::sqrt(2.0 * retained);
    AmplitudeState s{std::vector<complexd>(d), std::vector<complexd>(d)};
    for (std::size_t n = 0; n < d; ++n) {
        s.excited[n] = scale * weights[n];
        s.ground[n] = scale * weights[n];
    }
    return s;
}

FidelityTrajectory fidelity_trajectory(const ValidityParams& p, double chi_t_final,
                                       std::size_t samples, const FockTruncation& t,
                                       complexd alpha) {
    if (p.model.chi <= 0.0)
        throw InvalidParamsError("fidelity_trajectory: chi must be positive");
    if (samples < 2) throw InvalidParamsError("fidelity_trajectory: need at least 2 samples");

    const double t_final = chi_t_final / p.model.chi;
    const double scale = amp_frequency_scale(p.model, t.n_max);

    // Target dt from the accuracy prefactor, floored so a single run stays
    // below max_steps_per_run steps, capped by the integrator accuracy guard.
    const double dt_raw = validity_tol::dt_prefactor / scale;
    const double dt_floor = t_final / validity_tol::max_steps_per_run;
    const double dt_cap = 0.8 * validity_tol::step_accuracy / scale;
    const double dt_target = std::min(std::max(dt_raw, dt_floor), dt_cap);

    const double segment = t_final / static_cast<double>(samples - 1);
    const std::size_t steps_per_segment =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(segment / dt_target - 1e-12)));
    const double dt = segment / static_cast<double>(steps_per_segment);

    const AmplitudeState initial = coherent_initial_state(alpha, t);
    DerivTables eff_tables(p.model, p.g_over_delta, t.n_max);
    DerivTables ddjc_tables(p.model, 0.0, t.n_max);
    Rk4Buffers buffers(t.fock_dim());

    AmplitudeState psi = initial;  // effective Hamiltonian
    AmplitudeState phi = initial;  // dispersive Hamiltonian

    FidelityTrajectory out;
    out.g_over_delta = p.g_over_delta;
    out.points.reserve(samples);
    out.points.push_back({0.0, fidelity(psi, phi)});

    double drift = 0.0;
    for (std::size_t seg = 1; seg < samples; ++seg) {
        for (std::size_t s = 0; s < steps_per_segment; ++s) {
            rk4_step(eff_tables, psi, dt, buffers);
            rk4_step(ddjc_tables, phi, dt, buffers);
        }
        drift = std::max({drift, std::abs(state_norm_sq(psi) - 1.0),
                          std::abs(state_norm_sq(phi) - 1.0)});
        const double chi_t =
            chi_t_final * static_cast<double>(seg) / static_cast<double>(samples - 1);
        out.points.push_back({chi_t, fidelity(psi, phi)});
    }
    out.max_norm_drift = drift;
    return out;
}

}  // namespace blockade
