// qadia command line: spectra, adiabaticity sweeps, loop evolution, regime
// classification and phase reports for the driven two-qubit model.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qadia/config.hpp"
#include "qadia/csv.hpp"
#include "qadia/dynamics.hpp"
#include "qadia/phases.hpp"
#include "qadia/regimes.hpp"
#include "qadia/schmidt.hpp"
#include "qadia/spectra.hpp"

namespace {

using namespace qadia;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    int n_steps = 0;
    int jobs = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file")->required();
    cmd->add_option("--out", opts.out_path, "output CSV path (default: output_path key or stdout)");
    cmd->add_option("--n-steps", opts.n_steps, "override the number of integration steps");
    cmd->add_option("--jobs", opts.jobs, "worker threads for sweeps (default: all cores)");
    cmd->add_flag("--quiet", opts.quiet, "suppress the human-readable report");
}

RunConfig load_config(const CommonOpts& opts) {
    RunConfig cfg = parse_config_file(opts.config_path);
    if (opts.n_steps > 0) {
        if (opts.n_steps < 16) throw ConfigError("--n-steps must be at least 16");
        cfg.n_steps = opts.n_steps;
    }
    if (!opts.out_path.empty()) cfg.output_path = opts.out_path;
    return cfg;
}

class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

LoopSpec make_loop(const RunConfig& cfg) {
    if (cfg.model.omega <= 0.0)
        throw ConfigError("omega must be positive for loop commands");
    return LoopSpec::one_period(cfg.model, cfg.n_steps);
}

// Largest adiabaticity metric along the frames. With a phiN seed only the
// pairs involving the seed label matter; otherwise all pairs are scanned.
// Degenerate pairs count as singular only when the drive connects them.
double gamma_evidence(const ModelSpec& model, const std::vector<GaugeFixedFrame>& frames,
                      int seed_label) {
    double value = 0.0;
    for (const auto& frame : frames) {
        const Mat4 dh = hamiltonian_derivative_at(model, frame.t);
        const double floor = 1e-10 * std::max(1.0, dh.cwiseAbs().maxCoeff());
        for (int i = 1; i <= 4; ++i) {
            for (int j = i + 1; j <= 4; ++j) {
                if (seed_label >= 1 && i != seed_label && j != seed_label) continue;
                const Complex me = frame.vectors.col(i - 1).dot(dh * frame.vectors.col(j - 1));
                if (frame.degenerate(i, j)) {
                    if (std::abs(me) > floor)
                        return std::numeric_limits<double>::infinity();
                    continue;
                }
                const double gap = frame.values(i - 1) - frame.values(j - 1);
                value = std::max(value, std::abs(me) / (gap * gap));
            }
        }
    }
    return value;
}

struct RunResult {
    Trajectory traj;
    std::vector<GaugeFixedFrame> frames;
    double gamma_max = 0.0;
    double ratio_max = 0.0;
    double p_drift_max = 0.0;
    std::optional<AmplitudeSeries> amplitudes;  // pure runs
    std::optional<SchmidtSeries> schmidt;       // pure runs
    ReducedDensitySeries reduced;
    RatioSeries ratios;
    RegimeLabel regime{Regime::AdiabaticA, 0, 0, 0};
    int seed_label = 0;
};

RunResult execute_run(const RunConfig& cfg) {
    const LoopSpec loop = make_loop(cfg);
    const SeedState seed = resolve_seed(cfg);

    RunResult res;
    res.seed_label = seed.label;
    res.traj = seed.mixed ? evolve_mixed(loop, seed.rho) : evolve_pure(loop, seed.psi);
    res.frames = loop_frames(loop);
    res.gamma_max = gamma_evidence(cfg.model, res.frames, seed.label);

    if (!seed.mixed) {
        res.amplitudes = project_amplitudes(res.traj, res.frames);
        res.schmidt = schmidt_series(res.traj);
        res.ratios = nontransitional_ratios(*res.schmidt);
        res.p_drift_max = res.schmidt->p_drift_max();
    } else {
        res.ratios = subsystem_ratio_series(res.traj);
    }
    res.reduced = reduced_density_eigen(res.traj);
    if (seed.mixed) res.p_drift_max = res.reduced.drift_max();

    res.ratio_max = res.ratios.any_singular() ? std::numeric_limits<double>::infinity()
                                              : res.ratios.max_finite();
    res.regime = classify(res.gamma_max, res.ratio_max, res.p_drift_max, cfg.thresholds);
    return res;
}

void print_phase_report(std::ostream& os, const PhaseReport& rep) {
    os << "total_phase      = " << format_num(rep.loop.total) << "\n";
    os << "dynamical_phase  = " << format_num(rep.loop.dynamical) << "\n";
    os << "geometric_phase  = " << format_num(rep.loop.geometric) << "\n";
    os << "cyclic_overlap   = " << format_num(rep.loop.cyclic_overlap)
       << (rep.loop.well_conditioned ? "" : "  (warning: loop barely cyclic)") << "\n";
    for (int l = 0; l < 4; ++l)
        os << "berry_phase_" << l + 1 << "    = " << format_num(rep.berry[l]) << "\n";
    if (rep.has_perturbative) {
        os << "phi_18           = " << format_num(rep.perturbative.phi_18) << "\n";
        os << "phi_19           = " << format_num(rep.perturbative.phi_19) << "\n";
        os << "gamma_metric_max = " << format_num(rep.perturbative.gamma_metric_max) << "\n";
    } else {
        os << "phi_18           = nan\nphi_19           = nan\n";
    }
}

void print_regime(std::ostream& os, const RegimeLabel& label) {
    os << "regime=" << regime_letter(label.regime)
       << " gamma_max=" << format_num(label.gamma_max)
       << " ratio_max=" << format_num(label.ratio_max)
       << " p_drift=" << format_num(label.p_drift_max) << "\n";
}

int cmd_spectrum(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    const LoopSpec loop = make_loop(cfg);
    const auto frames = loop_frames(loop);

    OutputStream out(cfg.output_path);
    CsvWriter csv(out.get());
    csv.header({"t", "E1", "E2", "E3", "E4", "gap12", "gap34"});
    for (const auto& f : frames)
        csv.row({f.t, f.values(0), f.values(1), f.values(2), f.values(3),
                 f.values(0) - f.values(1), f.values(2) - f.values(3)});
    if (!opts.quiet && !cfg.output_path.empty())
        std::cout << "spectrum written to " << cfg.output_path << "\n";
    return 0;
}

int cmd_sweep_gamma(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    if (cfg.theta_count < 2 || cfg.g_count < 2)
        throw ConfigError("sweep grids need at least two points per axis");
    if (!(cfg.theta_min <= cfg.theta_max) || !(cfg.g_min <= cfg.g_max))
        throw ConfigError("sweep ranges must be ordered (min <= max)");

    const auto thetas = linspace(cfg.theta_min, cfg.theta_max, cfg.theta_count);
    const auto gs = linspace(cfg.g_min, cfg.g_max, cfg.g_count);
    const GammaSurface surf =
        gamma_surface(cfg.model.coupling, cfg.model.omega, thetas, gs, opts.jobs);

    OutputStream out(cfg.output_path);
    CsvWriter csv(out.get());
    csv.header({"theta", "g", "gamma12", "gamma34", "singular12", "singular34"});
    for (std::size_t it = 0; it < thetas.size(); ++it)
        for (std::size_t ig = 0; ig < gs.size(); ++ig) {
            const std::size_t c = surf.index(it, ig);
            csv.row({thetas[it], gs[ig], surf.gamma12[c], surf.gamma34[c],
                     static_cast<double>(surf.singular12[c]),
                     static_cast<double>(surf.singular34[c])});
        }
    if (!opts.quiet && !cfg.output_path.empty())
        std::cout << "gamma surface written to " << cfg.output_path << "\n";
    return 0;
}

int cmd_evolve(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    const RunResult res = execute_run(cfg);

    OutputStream out(cfg.output_path);
    CsvWriter csv(out.get());
    csv.header({"t", "c1_sq", "c2_sq", "c3_sq", "c4_sq", "p1", "p2", "R12", "norm_drift"});
    const std::size_t n = res.traj.n_samples();
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> row;
        row.push_back(res.traj.times[k]);
        if (!res.traj.mixed()) {
            for (int l = 0; l < 4; ++l) row.push_back(std::norm(res.amplitudes->c[k][l]));
            row.push_back(res.schmidt->p[k][0]);
            row.push_back(res.schmidt->p[k][1]);
        } else {
            const Mat4& rho = res.traj.rho_states[k];
            for (int l = 0; l < 4; ++l) {
                const Vec4 v = res.frames[k].vectors.col(l);
                row.push_back(v.dot(rho * v).real());
            }
            row.push_back(res.reduced.eigenvalues[k][0]);
            row.push_back(res.reduced.eigenvalues[k][1]);
        }
        row.push_back(res.ratios.singular[k] ? std::numeric_limits<double>::infinity()
                                             : res.ratios.values[k]);
        const double drift = res.traj.mixed()
                                 ? std::abs(res.traj.rho_states[k].trace().real() - 1.0)
                                 : std::abs(res.traj.states[k].norm() - 1.0);
        row.push_back(drift);
        csv.row(row);
    }

    if (!opts.quiet) {
        std::ostream& os = std::cout;
        if (!cfg.output_path.empty()) os << "trajectory written to " << cfg.output_path << "\n";
        if (!res.traj.mixed()) {
            const PhaseReport rep = make_phase_report(res.traj, res.frames, res.seed_label);
            print_phase_report(os, rep);
        } else {
            os << "phases           : not defined for mixed seeds\n";
        }
        os << "final_norm_drift = "
           << format_num(res.traj.mixed()
                             ? std::abs(res.traj.rho_states.back().trace().real() - 1.0)
                             : std::abs(res.traj.states.back().norm() - 1.0))
           << "\n";
        print_regime(os, res.regime);
    }
    return 0;
}

int cmd_classify(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    const RunResult res = execute_run(cfg);
    print_regime(std::cout, res.regime);
    return 0;
}

int cmd_phases(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    const SeedState seed = resolve_seed(cfg);
    if (seed.mixed) throw ConfigError("phases requires a pure seed");
    const RunResult res = execute_run(cfg);
    const PhaseReport rep = make_phase_report(res.traj, res.frames, res.seed_label);

    if (!opts.quiet) {
        print_phase_report(std::cout, rep);
        print_regime(std::cout, res.regime);
    }
    if (!cfg.output_path.empty()) {
        OutputStream out(cfg.output_path);
        CsvWriter csv(out.get());
        csv.header({"total_phase", "dynamical_phase", "geometric_phase", "cyclic_overlap",
                    "berry1", "berry2", "berry3", "berry4", "phi_18", "phi_19"});
        const double nan = std::numeric_limits<double>::quiet_NaN();
        csv.row({rep.loop.total, rep.loop.dynamical, rep.loop.geometric,
                 rep.loop.cyclic_overlap, rep.berry[0], rep.berry[1], rep.berry[2],
                 rep.berry[3], rep.has_perturbative ? rep.perturbative.phi_18 : nan,
                 rep.has_perturbative ? rep.perturbative.phi_19 : nan});
        if (!opts.quiet) std::cout << "phases written to " << cfg.output_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven two-qubit loops: spectra, adiabaticity metrics, Schmidt weights,"
                 " geometric phases and regime classification"};
    app.require_subcommand(1);

    CommonOpts spectrum_opts, sweep_opts, evolve_opts, classify_opts, phases_opts;
    auto* spectrum = app.add_subcommand("spectrum", "instantaneous levels along one loop");
    add_common(spectrum, spectrum_opts);
    auto* sweep = app.add_subcommand("sweep-gamma", "adiabaticity metrics over a (theta, g) grid");
    add_common(sweep, sweep_opts);
    auto* evolve = app.add_subcommand("evolve", "integrate one loop and emit the time series");
    add_common(evolve, evolve_opts);
    auto* classify = app.add_subcommand("classify", "label one run A/B/C/D from its evidence");
    add_common(classify, classify_opts);
    auto* phases = app.add_subcommand("phases", "phase report for one loop");
    add_common(phases, phases_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(spectrum_opts);
        if (sweep->parsed()) return cmd_sweep_gamma(sweep_opts);
        if (evolve->parsed()) return cmd_evolve(evolve_opts);
        if (classify->parsed()) return cmd_classify(classify_opts);
        if (phases->parsed()) return cmd_phases(phases_opts);
    } catch (const ConfigError& e) {
        if (e.line > 0)
            std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NonPhysical& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const StepTooLarge& e) {
        std::cerr << "numerical guard: " << e.what() << "; rerun with --n-steps "
                  << e.suggested_n_steps << " or more\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
