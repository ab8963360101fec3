#include "blockade/model.hpp"

#include <cmath>

namespace blockade {

void validate(const ModelParams& p) {
    if (p.kappa != 1.0)
        throw InvalidParamsError("ModelParams: kappa must be exactly 1 (it is the frequency unit)");
    if (p.eta < 0.0) throw InvalidParamsError("ModelParams: eta must be >= 0");
    if (p.omega_r < 0.0) throw InvalidParamsError("ModelParams: omega_r must be >= 0");
    if (p.gamma < 0.0) throw InvalidParamsError("ModelParams: gamma must be >= 0");
}

void validate(const FockTruncation& t) {
    if (t.n_max < 2)
        throw InvalidParamsError("FockTruncation: n_max must be >= 2 for two-photon statistics");
}

ComplexMatrix fock_annihilation(const FockTruncation& t) {
    const std::size_t d = t.fock_dim();
    ComplexMatrix a(d, d);
    for (std::size_t n = 0; n + 1 < d; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    return a;
}

ComplexMatrix fock_number(const FockTruncation& t) {
    const std::size_t d = t.fock_dim();
    ComplexMatrix n_op(d, d);
    for (std::size_t n = 0; n < d; ++n) n_op(n, n) = static_cast<double>(n);
    return n_op;
}

ComplexMatrix atom_sigma_x() {
    ComplexMatrix s(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
}

ComplexMatrix atom_sigma_z() {
    ComplexMatrix s(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

ComplexMatrix atom_sigma_minus() {
    // sigma_- = |g><e| with basis order {|e>, |g>}
    ComplexMatrix s(2, 2);
    s(1, 0) = 1.0;
    return s;
}

ComplexMatrix joint_annihilation(const FockTruncation& t) {
    return kron(ComplexMatrix::identity(2), fock_annihilation(t));
}

ComplexMatrix joint_sigma_minus(const FockTruncation& t) {
    return kron(atom_sigma_minus(), ComplexMatrix::identity(t.fock_dim()));
}

// Shared core: detuning * n + (Delta_0/2) sigma_z + chi n sigma_z + (Omega_R/2) sigma_x.
// Filled entry-by-entry; every term is diagonal in the photon number except
// the sigma_x drive, which couples |e,n> <-> |g,n>.
static ComplexMatrix build_core(double detuning, const ModelParams& p, const FockTruncation& t) {
    validate(p);
    validate(t);
    const std::size_t nf = t.fock_dim();
    ComplexMatrix h(t.joint_dim(), t.joint_dim());
    for (std::size_t n = 0; n < nf; ++n) {
        const double nd = static_cast<double>(n);
        const std::size_t e = joint_index(0, n, t);
        const std::size_t g = joint_index(1, n, t);
        h(e, e) = nd * detuning + 0.5 * p.delta_0 + nd * p.chi;
        h(g, g) = nd * detuning - 0.5 * p.delta_0 - nd * p.chi;
        h(e, g) = 0.5 * p.omega_r;
        h(g, e) = 0.5 * p.omega_r;
    }
    return h;
}

ComplexMatrix build_h_ddjc(const ModelParams& p, const FockTruncation& t) {
    return build_core(p.delta_c_prime, p, t);
}

ComplexMatrix build_h_full(const ModelParams& p, const FockTruncation& t) {
    ComplexMatrix h = build_core(p.delta_c, p, t);
    const std::size_t nf = t.fock_dim();
    for (std::size_t atom = 0; atom < 2; ++atom) {
        for (std::size_t n = 0; n + 1 < nf; ++n) {
            const double amp = p.eta * std::sqrt(static_cast<double>(n + 1));
            const std::size_t lo = joint_index(atom, n, t);
            const std::size_t hi = joint_index(atom, n + 1, t);
            h(lo, hi) += amp;
            h(hi, lo) += amp;
        }
    }
    return h;
}

ComplexMatrix build_h_eff(const ModelParams& p, const FockTruncation& t, double g_over_delta) {
    ComplexMatrix h = build_h_ddjc(p, t);
    const double drive = 0.5 * p.omega_r * g_over_delta;
    const std::size_t nf = t.fock_dim();
    for (std::size_t atom = 0; atom < 2; ++atom) {
        const double sz = atom == 0 ? 1.0 : -1.0;
        for (std::size_t n = 0; n + 1 < nf; ++n) {
            const double amp = sz * drive * std::sqrt(static_cast<double>(n + 1));
            const std::size_t lo = joint_index(atom, n, t);
            const std::size_t hi = joint_index(atom, n + 1, t);
            h(lo, hi) += amp;
            h(hi, lo) += amp;
        }
    }
    return h;
}

double mixing_angle(const ModelParams& p, std::size_t m) {
    const double d = p.delta_0 + 2.0 * static_cast<double>(m) * p.chi;
    return 0.5 * std::atan2(p.omega_r, d);
}

double eigen_energy(const ModelParams& p, std::size_t m, Branch b) {
    const double md = static_cast<double>(m);
    const double d = p.delta_0 + 2.0 * md * p.chi;
    const double split = 0.5 * std::sqrt(d * d + p.omega_r * p.omega_r);
    return md * p.delta_c_prime + (b == Branch::plus ? split : -split);
}

std::vector<EigenPair> analytic_spectrum(const ModelParams& p, std::size_t m_max) {
    std::vector<EigenPair> out;
    out.reserve(2 * (m_max + 1));
    for (std::size_t m = 0; m <= m_max; ++m) {
        const double theta = mixing_angle(p, m);
        out.push_back({m, Branch::plus, eigen_energy(p, m, Branch::plus), theta});
        out.push_back({m, Branch::minus, eigen_energy(p, m, Branch::minus), theta});
    }
    return out;
}

std::pair<ComplexVector, ComplexVector> dressed_states(const ModelParams& p, std::size_t m,
                                                       const FockTruncation& t) {
    if (m > t.n_max) throw InvalidParamsError("dressed_states: m exceeds truncation");
    const double theta = mixing_angle(p, m);
    ComplexVector plus(t.joint_dim());
    ComplexVector minus(t.joint_dim());
    plus[joint_index(0, m, t)] = std::cos(theta);
    plus[joint_index(1, m, t)] = std::sin(theta);
    minus[joint_index(0, m, t)] = -std::sin(theta);
    minus[joint_index(1, m, t)] = std::cos(theta);
    return {plus, minus};
}

std::vector<ResonanceEntry> resonance_detunings(const ModelParams& p) {
    if (p.chi == 0.0) throw ZeroChiError("resonance_detunings: chi must be nonzero");
    const double r0 = std::sqrt(p.delta_0 * p.delta_0 + p.omega_r * p.omega_r);
    const double d1 = p.delta_0 + 2.0 * p.chi;
    const double r1 = std::sqrt(d1 * d1 + p.omega_r * p.omega_r);
    const double d2 = p.delta_0 + 4.0 * p.chi;
    const double r2 = std::sqrt(d2 * d2 + p.omega_r * p.omega_r);

    // Delta^{k,b}_{0,s} = (s r0 - b r_k) / (2k): the detuning where the
    // k-photon transition |eps_{0,s}> -> |eps_{k,b}> becomes resonant.
    auto single = [&](double s, double b) { return (s * r0 - b * r1) / 2.0; };
    auto two = [&](double s, double b) { return (s * r0 - b * r2) / 4.0; };

    std::vector<ResonanceEntry> out;
    out.push_back({"d1", "|eps_{0,-}> -> |eps_{1,+}>", single(-1.0, +1.0)});
    out.push_back({"d2", "|eps_{0,-}> -> |eps_{1,-}>", single(-1.0, -1.0)});
    out.push_back({"d3", "|eps_{0,+}> -> |eps_{1,+}>", single(+1.0, +1.0)});
    out.push_back({"d4", "|eps_{0,+}> -> |eps_{1,-}>", single(+1.0, -1.0)});
    out.push_back({"p1", "|eps_{0,-}> -> |eps_{2,+}>", two(-1.0, +1.0)});
    out.push_back({"p2", "|eps_{0,-}> -> |eps_{2,-}>", two(-1.0, -1.0)});
    out.push_back({"p3", "|eps_{0,+}> -> |eps_{2,+}>", two(+1.0, +1.0)});
    out.push_back({"p4", "|eps_{0,+}> -> |eps_{2,-}>", two(+1.0, -1.0)});
    return out;
}

double resonance_value(const ModelParams& p, const std::string& label) {
    for (const auto& entry : resonance_detunings(p))
        if (entry.label == label) return entry.delta_c;
    throw InvalidParamsError("resonance_value: unknown label '" + label + "'");
}

}  // namespace blockade
