// Command-line front end: parameter sweeps and analytic tables as CSV.
//
// Config files are flat INI (key=value, '#'/';' comments) with keys named
// after the long options; values from the file are injected ahead of the
// command-line flags, so explicit flags always win.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blockade/sweep.hpp"

using namespace blockade;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t default_nmax_or_die() {
    const char* env = std::getenv("BLOCKADE_NMAX");
    if (!env) return lindblad_tol::default_n_max;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (!end || *end != '\0' || v < 2 || v > 31) {
        std::cerr << "error: BLOCKADE_NMAX must be an integer in [2, 31]\n";
        std::exit(kExitInvalidConfig);
    }
    return static_cast<std::size_t>(v);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Keys each subcommand accepts from a config file ("kind" is checked against
// the subcommand rather than mapped to a flag).
const std::map<std::string, std::set<std::string>>& allowed_config_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"sweep-detuning",
         {"start", "stop", "points", "chi", "omega-ratio", "eta", "gamma", "delta0", "nmax",
          "out"}},
        {"sweep-omega",
         {"start", "stop", "points", "chi", "eta", "gamma", "delta0", "branch", "nmax", "out"}},
        {"sweep-chi",
         {"start", "stop", "points", "omega-ratio", "eta", "gamma", "delta0", "branch", "nmax",
          "out"}},
        {"fidelity", {"stop", "points", "chi", "omega-ratio", "delta0", "nmax", "out"}},
        {"resonances", {"chi", "omega-ratio", "delta0", "out"}},
        {"spectrum", {"chi", "omega-ratio", "delta0", "delta-c-prime", "m-max", "out"}},
    };
    return keys;
}

const std::map<std::string, std::string>& kind_names() {
    static const std::map<std::string, std::string> kinds = {
        {"sweep-detuning", "detuning"},
        {"sweep-omega", "omega_ratio"},
        {"sweep-chi", "chi_ratio"},
        {"fidelity", "fidelity"},
    };
    return kinds;
}

// Reads the INI file and returns "--key value ..." arguments for injection.
std::vector<std::string> config_args(const std::string& path, const std::string& subcmd) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    const auto allowed_it = allowed_config_keys().find(subcmd);
    if (allowed_it == allowed_config_keys().end())
        throw ConfigError("--config requires a subcommand that accepts one");

    std::vector<std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        for (auto& c : key)
            if (c == '_') c = '-';

        if (key == "kind") {
            const auto kind_it = kind_names().find(subcmd);
            if (kind_it == kind_names().end() || value != kind_it->second)
                throw ConfigError(path + ": kind '" + value + "' does not match subcommand '" +
                                  subcmd + "'");
            continue;
        }
        if (!allowed_it->second.count(key))
            throw ConfigError(path + ": unknown key '" + key + "' for " + subcmd);
        out.push_back("--" + key);
        out.push_back(value);
    }
    return out;
}

// Strips --config from the raw arguments and injects the file-derived flags
// right after the subcommand, keeping explicit flags later (they win).
std::vector<std::string> assemble_args(int argc, char** argv) {
    std::vector<std::string> raw(argv + 1, argv + argc);
    std::vector<std::string> args;
    std::string config_path;
    std::string subcmd;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 >= raw.size()) throw ConfigError("--config needs a file path");
            config_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        } else {
            if (subcmd.empty() && !raw[i].empty() && raw[i][0] != '-') subcmd = raw[i];
            args.push_back(raw[i]);
        }
    }
    if (!config_path.empty()) {
        if (subcmd.empty()) throw ConfigError("--config needs a subcommand");
        const std::vector<std::string> injected = config_args(config_path, subcmd);
        std::vector<std::string> merged;
        for (const auto& a : args) {
            merged.push_back(a);
            if (a == subcmd && merged.size() == 1)
                merged.insert(merged.end(), injected.begin(), injected.end());
        }
        return merged;
    }
    return args;
}

void emit(const std::string& out, const std::string& csv) {
    if (out.empty() || out == "-") {
        std::cout << csv;
        return;
    }
    write_file(out, csv);
    std::cerr << "wrote " << out << "\n";
}

std::string sidecar_path(const std::string& out) {
    const auto dot = out.rfind('.');
    if (dot == std::string::npos) return out + "_resonances.csv";
    return out.substr(0, dot) + "_resonances" + out.substr(dot);
}

// Option bundle shared by the sweep subcommands.
struct SweepOpts {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
    double chi = 15.0;
    double omega_ratio = 2.0;
    double eta = 0.1;
    double gamma = 0.5;
    double delta0 = 0.0;
    std::size_t nmax = 12;
    std::string branch;
    std::string out;
};

ModelParams fixed_params(const SweepOpts& o, bool omega_from_ratio) {
    ModelParams p;
    p.chi = o.chi;
    p.omega_r = omega_from_ratio ? o.omega_ratio * o.chi : 0.0;
    p.eta = o.eta;
    p.gamma = o.gamma;
    p.delta_0 = o.delta0;
    return p;
}

CLI::App* make_subcommand(CLI::App& app, const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    // config-file values are injected before explicit flags; last value wins
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return sub;
}

void add_grid_flags(CLI::App* sub, SweepOpts& o, double start, double stop, std::size_t points) {
    o.start = start;
    o.stop = stop;
    o.points = points;
    sub->add_option("--start", o.start, "axis start")->capture_default_str();
    sub->add_option("--stop", o.stop, "axis stop")->capture_default_str();
    sub->add_option("--points", o.points, "number of grid points")->capture_default_str();
}

void add_model_flags(CLI::App* sub, SweepOpts& o, bool with_chi, bool with_omega_ratio) {
    if (with_chi)
        sub->add_option("--chi", o.chi, "dispersive coupling chi/kappa")->capture_default_str();
    if (with_omega_ratio)
        sub->add_option("--omega-ratio", o.omega_ratio, "atomic drive ratio Omega_R/chi")
            ->capture_default_str();
    sub->add_option("--eta", o.eta, "cavity drive strength eta/kappa")->capture_default_str();
    sub->add_option("--gamma", o.gamma, "atomic decay gamma/kappa")->capture_default_str();
    sub->add_option("--delta0", o.delta0, "shifted atomic detuning Delta_0/kappa")
        ->capture_default_str();
    sub->add_option("--nmax", o.nmax, "Fock cutoff N (BLOCKADE_NMAX overrides the default)")
        ->capture_default_str();
}

void add_config_help(CLI::App* sub) {
    sub->footer("  --config FILE reads defaults from a flat INI file (key=value, keys match\n"
                "  the long option names); explicit flags override config values.");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t nmax_default = default_nmax_or_die();

    CLI::App app{"Driven dispersive Jaynes-Cummings photon-blockade simulator"};
    app.require_subcommand(1);

    int exit_code = kExitOk;

    // sweep-detuning: steady-state statistics over a grid of Delta_c.
    SweepOpts det;
    det.nmax = nmax_default;
    det.out = "detuning_sweep.csv";
    auto* det_sub = make_subcommand(
        app, "sweep-detuning", "steady-state P_n and g2(0) vs cavity-drive detuning Delta_c");
    add_grid_flags(det_sub, det, -45.0, 45.0, 901);
    add_model_flags(det_sub, det, true, true);
    det_sub->add_option("--out", det.out, "output CSV path")->capture_default_str();
    add_config_help(det_sub);
    det_sub->callback([&] {
        SweepSpec spec;
        spec.kind = SweepKind::detuning;
        spec.axis = {det.start, det.stop, det.points};
        spec.fixed = fixed_params(det, true);
        spec.truncation = {det.nmax};
        spec.output_path = det.out;
        validate(spec);
        const auto rows = run_detuning_sweep(spec);
        emit(det.out, sweep_csv(rows));
        emit(sidecar_path(det.out), resonance_csv(resonance_detunings(spec.fixed)));
        if (any_solver_failure(rows)) exit_code = kExitSolverFailure;
    });

    // sweep-omega: g2(0) vs Omega_R/chi with Delta_c pinned to a resonance.
    SweepOpts om;
    om.nmax = nmax_default;
    om.out = "omega_sweep.csv";
    auto* om_sub = make_subcommand(
        app, "sweep-omega", "steady-state g2(0) vs Omega_R/chi on a pinned resonance branch");
    add_grid_flags(om_sub, om, 0.1, 10.0, 100);
    add_model_flags(om_sub, om, true, false);
    om_sub->add_option("--branch", om.branch, "resonance branch d1..d4 pinning Delta_c")
        ->required();
    om_sub->add_option("--out", om.out, "output CSV path")->capture_default_str();
    add_config_help(om_sub);
    om_sub->callback([&] {
        SweepSpec spec;
        spec.kind = SweepKind::omega_ratio;
        spec.axis = {om.start, om.stop, om.points};
        spec.fixed = fixed_params(om, false);
        spec.resonance_branch = om.branch;
        spec.truncation = {om.nmax};
        spec.output_path = om.out;
        validate(spec);
        const auto rows = run_omega_sweep(spec);
        emit(om.out, sweep_csv(rows));
        if (any_solver_failure(rows)) exit_code = kExitSolverFailure;
    });

    // sweep-chi: g2(0) vs chi/kappa at fixed Omega_R/chi on a resonance.
    SweepOpts ch;
    ch.nmax = nmax_default;
    ch.out = "chi_sweep.csv";
    auto* ch_sub = make_subcommand(
        app, "sweep-chi",
        "steady-state g2(0) vs chi/kappa at fixed Omega_R/chi on a resonance branch");
    add_grid_flags(ch_sub, ch, 1.0, 30.0, 59);
    add_model_flags(ch_sub, ch, false, true);
    ch_sub->add_option("--branch", ch.branch, "resonance branch d1..d4 pinning Delta_c")
        ->required();
    ch_sub->add_option("--out", ch.out, "output CSV path")->capture_default_str();
    add_config_help(ch_sub);
    ch_sub->callback([&] {
        SweepSpec spec;
        spec.kind = SweepKind::chi_ratio;
        spec.axis = {ch.start, ch.stop, ch.points};
        spec.fixed = fixed_params(ch, true);
        spec.resonance_branch = ch.branch;
        spec.truncation = {ch.nmax};
        spec.output_path = ch.out;
        validate(spec);
        const auto rows = run_chi_sweep(spec);
        emit(ch.out, sweep_csv(rows));
        if (any_solver_failure(rows)) exit_code = kExitSolverFailure;
    });

    // fidelity: closed-system F(t) per g/Delta ratio.
    SweepOpts fid;
    fid.nmax = nmax_default;
    fid.out = "fidelity.csv";
    fid.stop = 10.0;
    fid.points = 201;
    auto* fid_sub = make_subcommand(
        app, "fidelity", "closed-system fidelity between effective and dispersive evolution");
    fid_sub->add_option("--stop", fid.stop, "time horizon in units of chi t")
        ->capture_default_str();
    fid_sub->add_option("--points", fid.points, "samples per g/Delta trajectory")
        ->capture_default_str();
    fid_sub->add_option("--chi", fid.chi, "dispersive coupling chi/kappa")->capture_default_str();
    fid_sub->add_option("--omega-ratio", fid.omega_ratio, "atomic drive ratio Omega_R/chi")
        ->capture_default_str();
    fid_sub->add_option("--delta0", fid.delta0, "shifted atomic detuning Delta_0/kappa")
        ->capture_default_str();
    fid_sub->add_option("--nmax", fid.nmax, "Fock cutoff N")->capture_default_str();
    fid_sub->add_option("--out", fid.out, "output CSV path")->capture_default_str();
    add_config_help(fid_sub);
    fid_sub->callback([&] {
        SweepSpec spec;
        spec.kind = SweepKind::fidelity;
        spec.axis = {0.0, fid.stop, fid.points};
        spec.fixed = fixed_params(fid, true);
        spec.fixed.eta = 0.0;
        spec.fixed.gamma = 0.0;
        spec.truncation = {fid.nmax};
        spec.output_path = fid.out;
        validate(spec);
        emit(fid.out, fidelity_csv(run_fidelity_sweep(spec)));
    });

    // resonances: the eight labeled detunings.
    SweepOpts res;
    auto* res_sub =
        make_subcommand(app, "resonances", "single- and two-photon resonance detunings");
    res_sub->add_option("--chi", res.chi, "dispersive coupling chi/kappa")->capture_default_str();
    res_sub->add_option("--omega-ratio", res.omega_ratio, "atomic drive ratio Omega_R/chi")
        ->capture_default_str();
    res_sub->add_option("--delta0", res.delta0, "shifted atomic detuning Delta_0/kappa")
        ->capture_default_str();
    res_sub->add_option("--out", res.out, "output CSV path ('-' or empty for stdout)")
        ->capture_default_str();
    add_config_help(res_sub);
    res_sub->callback([&] {
        emit(res.out, resonance_csv(resonance_detunings(fixed_params(res, true))));
    });

    // spectrum: closed-form eigenvalues and mixing angles.
    SweepOpts sp;
    double sp_dcp = 0.0;
    std::size_t sp_mmax = 2;
    auto* sp_sub = make_subcommand(app, "spectrum", "closed-form eigenvalues E_{m,+-}");
    sp_sub->add_option("--chi", sp.chi, "dispersive coupling chi/kappa")->capture_default_str();
    sp_sub->add_option("--omega-ratio", sp.omega_ratio, "atomic drive ratio Omega_R/chi")
        ->capture_default_str();
    sp_sub->add_option("--delta0", sp.delta0, "shifted atomic detuning Delta_0/kappa")
        ->capture_default_str();
    sp_sub->add_option("--delta-c-prime", sp_dcp, "cavity detuning Delta'_c/kappa")
        ->capture_default_str();
    sp_sub->add_option("--m-max", sp_mmax, "highest photon sector m")->capture_default_str();
    sp_sub->add_option("--out", sp.out, "output CSV path ('-' or empty for stdout)")
        ->capture_default_str();
    add_config_help(sp_sub);
    sp_sub->callback([&] {
        ModelParams p = fixed_params(sp, true);
        p.delta_c_prime = sp_dcp;
        emit(sp.out, spectrum_csv(analytic_spectrum(p, sp_mmax)));
    });

    try {
        std::vector<std::string> args = assemble_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const InvalidParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const TruncationTooSmallError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ZeroChiError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
