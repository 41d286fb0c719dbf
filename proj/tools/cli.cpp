#include "cli.hpp"

#include "subharm/errors.hpp"
#include "subharm/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#ifndef SUBHARM_VERSION
#define SUBHARM_VERSION "0.0.0"
#endif

namespace subharm::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collects outputs and writes the manifest of one output directory.
class Run {
public:
    Run(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    fs::path path(const std::string& name) { return outputs_.emplace_back(dir_ / name); }
    void input(const fs::path& p) { inputs_.push_back(p); }
    void finish(Json config, long steps = 0) {
        RunManifest m;
        m.command = command_;
        m.config = std::move(config);
        m.tool_version = SUBHARM_VERSION;
        m.inputs = inputs_;
        m.outputs = outputs_;
        m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        m.steps = steps;
        write_manifest(m, dir_);
    }

private:
    std::string command_;
    fs::path dir_;
    std::vector<fs::path> inputs_, outputs_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ParamMap parse_params(const std::vector<std::string>& items) {
    ParamMap params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + item + "'");
        try {
            std::size_t used = 0;
            const std::string text = item.substr(eq + 1);
            params[item.substr(0, eq)] = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } catch (const std::logic_error&) {
            throw UsageError("--param value is not a number in '" + item + "'");
        }
    }
    return params;
}

BlochOptions bloch_options(const WaveProfile& p, int modes, int scan = 256) {
    BlochOptions o;
    o.m = std::max(modes > 0 ? modes : 32, p.m_f);
    o.scan = scan;
    return o;
}

/// Truncates the profile to the modes a grid with m_x points per cell resolves, provided the
/// dropped coefficients are at rounding level.
WaveProfile fit_to_grid(const WaveProfile& p, int m_x) {
    const int keep = (m_x - 1) / 2;
    if (p.m_f <= keep) return p;
    double dropped = 0.0, total = 0.0;
    for (const auto& c : p.coeffs)
        for (int l = -p.m_f; l <= p.m_f; ++l) {
            total = std::max(total, std::abs(c(l + p.m_f)));
            if (std::abs(l) > keep) dropped = std::max(dropped, std::abs(c(l + p.m_f)));
        }
    if (dropped > 1e-13 * total)
        throw ArgumentError("profile modes beyond " + std::to_string(keep) + " are not negligible; use m_x >= " +
                            std::to_string(2 * p.m_f + 1));
    return resample_profile(p, keep);
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
    std::string model;
    std::vector<std::string> params;
    int modes = 32;
    std::string guess = "analytic";
    std::string solve_for = "c";
    double tol = 1e-10;
    int max_iter = 40;
    double k = 0.0;
    std::string out = "profile.json";
};

int cmd_profile(const ProfileArgs& a) {
    const ReactionModel model = ReactionModel::from_id(a.model, parse_params(a.params));
    WaveProfile guess = [&] {
        if (a.guess == "analytic") return default_guess(model, a.modes, a.k);
        if (a.guess.rfind("file:", 0) == 0) {
            WaveProfile g = load_profile(a.guess.substr(5));
            if (g.model.id() != model.id()) throw ArgumentError("guess file holds a '" + g.model.id() + "' profile");
            g.model = model;
            return g.m_f == a.modes ? g : resample_profile(g, a.modes);
        }
        throw UsageError("--guess must be 'analytic' or 'file:PATH'");
    }();
    ProfileSolveOptions options;
    options.tol = a.tol;
    options.max_iter = a.max_iter;
    const auto unknowns = a.solve_for == "k" ? ProfileUnknowns::CoeffsAndWavenumber : ProfileUnknowns::CoeffsAndSpeed;
    std::vector<double> history;
    const WaveProfile profile = [&] {
        try {
            return solve_profile(guess, unknowns, options, &history);
        } catch (const NumericError&) {
            std::cerr << "residual history:";
            for (double r : history) std::cerr << ' ' << format_double(r);
            std::cerr << '\n';
            throw;
        }
    }();
    const fs::path out = a.out;
    Run run("profile", out.has_parent_path() ? out.parent_path() : fs::path("."));
    if (a.guess != "analytic") run.input(a.guess.substr(5));
    run.path(out.filename().string());
    save_profile(profile, out);
    run.finish({{"model", a.model},
                {"params", model.params()},
                {"modes", a.modes},
                {"guess", a.guess},
                {"solve_for", a.solve_for},
                {"tol", a.tol},
                {"max_iter", a.max_iter},
                {"k", a.k}},
               long(history.size()));
    std::printf("profile %s k=%s c=%s residual=%.3e iterations=%zu\n", model.id().c_str(),
                format_double(profile.k).c_str(), format_double(profile.c).c_str(), profile.residual_norm,
                history.size());
    return exit_ok;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
    std::string profile;
    int scan = 256;
    int modes = 0;
    double xi_max = 0.0;
    int samples = 64;
    std::string out_dir = "spectrum";
};

int cmd_spectrum(const SpectrumArgs& a) {
    const WaveProfile profile = load_profile(a.profile);
    Run run("spectrum", a.out_dir);
    run.input(a.profile);
    const BlochOptions options = bloch_options(profile, a.modes, a.scan);
    const StabilityReport report = verify_diffusive_stability(profile, options);
    const double xi_max = a.xi_max > 0.0 ? a.xi_max : (report.xi_1 > 0.0 ? report.xi_1 : 0.25);
    const CriticalCurve curve = critical_curve(profile, xi_max, a.samples, options);

    write_csv(run.path("spectrum.csv"), {"xi", "max_re", "critical_re"},
              {report.scan_xi, report.scan_max_re, report.scan_critical_re});
    std::vector<double> re, im;
    for (const auto& l : curve.lambda) {
        re.push_back(l.real());
        im.push_back(l.imag());
    }
    write_csv(run.path("critical_curve.csv"), {"xi", "re", "im"}, {curve.xi, re, im});
    Json doc = to_json(report);
    doc["a"] = curve.a;
    doc["d"] = curve.d;
    doc["curve_xi_max"] = curve.xi_max;
    write_json(doc, run.path("stability.json"));
    run.finish({{"scan", a.scan}, {"modes", options.m}, {"xi_max", xi_max}, {"samples", a.samples}});
    std::printf("verdict %s theta=%.6g a=%.3e d=%.6g xi_1=%.6g delta_1=%.6g\n", report.verdict ? "true" : "false",
                report.theta, curve.a, curve.d, report.xi_1, report.delta_1);
    for (const auto& line : report.details) std::printf("  %s\n", line.c_str());
    return exit_ok;
}

// ---------------------------------------------------------------- gap

struct GapArgs {
    std::string profile;
    std::vector<int> N{1};
    int modes = 0;
    bool spectrum = false;
    std::string out_dir = "gap";
};

int cmd_gap(const GapArgs& a) {
    const WaveProfile profile = load_profile(a.profile);
    Run run("gap", a.out_dir);
    run.input(a.profile);
    const BlochOptions options = bloch_options(profile, a.modes);
    Json reports = Json::array();
    std::vector<double> Ns, delta, attain;
    for (int N : a.N) {
        const SubharmonicGapReport r = subharmonic_spectrum(profile, N, options);
        reports.push_back(to_json(r, a.spectrum));
        Ns.push_back(N);
        delta.push_back(r.delta_N);
        attain.push_back(r.attaining_xi);
        std::printf("N=%d delta_N=%s attaining_xi=%.6g\n", N, format_double(r.delta_N).c_str(), r.attaining_xi);
    }
    write_csv(run.path("gap.csv"), {"N", "delta_N", "attaining_xi"}, {Ns, delta, attain});
    write_json({{"schema", schema_version}, {"kind", "gap"}, {"reports", reports}}, run.path("gap.json"));
    run.finish({{"N", a.N}, {"modes", options.m}, {"spectrum", a.spectrum}});
    return exit_ok;
}

// ---------------------------------------------------------------- linear-decay

struct LinearDecayArgs {
    std::string profile;
    std::vector<int> N{4, 8, 16, 32, 64};
    double tmin = 10.0;
    double tmax = 0.0;
    int samples = 48;
    int l = 1;
    int m = 1;
    std::uint64_t seed = 1;
    std::string shape = "localized";
    int m_x = 33;
    std::string out_dir = "linear_decay";
};

int cmd_linear_decay(const LinearDecayArgs& a) {
    const WaveProfile profile = fit_to_grid(load_profile(a.profile), a.m_x);
    Run run("linear-decay", a.out_dir);
    run.input(a.profile);
    LinearDecayOptions o;
    o.m_x = a.m_x;
    o.t_lo = a.tmin;
    o.t_hi = a.tmax;
    o.samples = a.samples;
    o.seed = a.seed;
    o.shape = a.shape;
    o.l = a.l;
    o.m = a.m;

    std::vector<LinearDecayStudy> studies;
    std::vector<std::vector<double>> cols(11);
    for (int N : a.N) {
        try {
            studies.push_back(linear_decay_study(profile, N, o));
        } catch (const RangeError& e) {
            throw RangeError(std::string(e.what()) + " (N=" + std::to_string(N) +
                             "; pass --tmax above --tmin or omit it)");
        }
        const auto& s = studies.back();
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            const double row[11] = {double(N), s.t[i], s.total[i], s.mean[i], s.sp[i], s.stilde[i], double(a.l),
                                    double(a.m), s.sp_x[i], s.sp_t[i], s.custom[i]};
            for (int c = 0; c < 11; ++c) cols[c].push_back(row[c]);
        }
        std::printf("N=%d slopes sp=%.3f sp_x=%.3f sp_t=%.3f custom=%.3f stilde=%.3f\n", N, s.fit_sp.exponent,
                    s.fit_sp_x.exponent, s.fit_sp_t.exponent, s.fit_custom.exponent, s.fit_stilde.exponent);
    }

    write_csv(run.path("decay.csv"),
              {"N", "t", "norm_total", "norm_mean_phase", "norm_sp", "norm_stilde", "l", "m", "norm_sp_x", "norm_sp_t",
               "norm_sp_lm"},
              cols);

    // uniformity: spread of the envelope constants across N for each quantity
    Json spread = Json::object();
    const std::map<std::string, DecayFit LinearDecayStudy::*> fields{{"sp", &LinearDecayStudy::fit_sp},
                                                                       {"sp_x", &LinearDecayStudy::fit_sp_x},
                                                                       {"sp_t", &LinearDecayStudy::fit_sp_t},
                                                                       {"custom", &LinearDecayStudy::fit_custom},
                                                                       {"stilde", &LinearDecayStudy::fit_stilde}};
    for (const auto& [name, field] : fields) {
        double lo = INFINITY, hi = 0.0;
        for (const auto& s : studies) {
            lo = std::min(lo, (s.*field).envelope_constant);
            hi = std::max(hi, (s.*field).envelope_constant);
        }
        spread[name] = {{"min", lo}, {"max", hi}, {"ratio", hi / lo}, {"bound", 2.0}, {"pass", hi <= 2.0 * lo}};
    }
    Json list = Json::array();
    for (const auto& s : studies) list.push_back(to_json(s));
    write_json({{"schema", schema_version}, {"kind", "linear_decay"}, {"studies", list}, {"uniformity", spread}},
               run.path("decay.json"));
    run.finish({{"N", a.N},
                {"tmin", a.tmin},
                {"tmax", a.tmax},
                {"samples", a.samples},
                {"l", a.l},
                {"m", a.m},
                {"seed", a.seed},
                {"shape", a.shape},
                {"m_x", a.m_x}});
    return exit_ok;
}

// ---------------------------------------------------------------- sum-bounds

struct SumBoundArgs {
    double d = 0.0;
    std::vector<int> r{0, 1, 2};
    std::vector<int> N{4, 8, 16, 32, 64, 128, 256};
    double tmax = 1e4;
    int samples = 400;
    std::string out_dir = "sum_bounds";
};

int cmd_sum_bounds(const SumBoundArgs& a) {
    Run run("sum-bounds", a.out_dir);
    std::vector<double> t_grid{0.0};
    for (double t : logspace(1e-2, a.tmax, a.samples)) t_grid.push_back(t);

    std::vector<double> cN, cr, ct, cs, ce;
    Json tables = Json::array(), probes = Json::array();
    for (int r : a.r) {
        const SumBoundTable table = sum_bound_check(a.d, r, a.N, t_grid);
        for (const auto& row : table.rows) {
            cN.push_back(row.N);
            cr.push_back(row.r);
            ct.push_back(row.t);
            cs.push_back(row.sum);
            ce.push_back(row.envelope_ratio);
        }
        Json j = to_json(table);
        j["r"] = r;
        j["bound"] = "c_global <= 2 c_continuum";
        j["pass"] = table.c_global <= 2.0 * table.c_continuum;
        tables.push_back(j);
        std::printf("r=%d C_global=%.6g C_continuum=%.6g ratio=%.4f\n", r, table.c_global, table.c_continuum,
                    table.c_global / table.c_continuum);
        for (int N : a.N) {
            const CrossoverProbe p = crossover_probe(a.d, N, r);
            Json pj = to_json(p);
            if (!p.degenerate) {
                const double rel = std::abs(p.late_rate / p.expected_rate - 1.0);
                pj["rate_relative_error"] = rel;
                pj["bound"] = "rate within 10%";
                pj["pass"] = rel <= 0.1;
            }
            probes.push_back(pj);
        }
    }
    write_csv(run.path("sum_bounds.csv"), {"N", "r", "t", "sum", "envelope_ratio"}, {cN, cr, ct, cs, ce});
    write_json({{"schema", schema_version}, {"kind", "sum_bounds"}, {"d", a.d}, {"tables", tables}, {"crossover", probes}},
               run.path("sum_bounds.json"));
    run.finish({{"d", a.d}, {"r", a.r}, {"N", a.N}, {"tmax", a.tmax}, {"samples", a.samples}});
    return exit_ok;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string profile;
    std::string config;
    std::string extract;
    std::string out_dir = "simulation";
    bool snapshots = true;
};

void write_trace(Run& run, const std::string& name, const ModulationTrace& tr) {
    std::vector<std::vector<double>> cols(9);
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
        const auto& n = tr.norms[j];
        const double row[9] = {tr.t[j], tr.gamma[j], tr.gamma_t[j], n.v_hk, n.psi_x_hk1,
                               n.psi_t_hk, n.composite_hk, n.grad_hk, tr.zeta[j]};
        for (int i = 0; i < 9; ++i) cols[i].push_back(row[i]);
    }
    write_csv(run.path(name), {"t", "gamma", "gamma_t", "v_hk", "psi_x_hk1", "psi_t_hk", "composite_hk", "grad_hk", "zeta"},
              cols);
}

int cmd_simulate(const SimulateArgs& a) {
    Json doc = Json::object();
    if (!a.config.empty()) doc = read_json(a.config);
    SimulationConfig config = config_from_json(doc);
    if (!a.extract.empty()) config.extraction = parse_extraction(a.extract);

    Run run("simulate", a.out_dir);
    const WaveProfile profile = [&] {
        if (!a.profile.empty() || doc.contains("profile")) {
            fs::path p = a.profile;
            if (p.empty()) {
                p = doc["profile"].get<std::string>();
                if (p.is_relative()) p = fs::path(a.config).parent_path() / p;
            }
            run.input(p);
            return load_profile(p);
        }
        if (doc.contains("model")) {
            const ReactionModel model = ReactionModel::from_id(doc["model"].get<std::string>(),
                                                               doc.value("params", ParamMap{}));
            return solve_profile(default_guess(model, doc.value("modes", 16)));
        }
        throw UsageError("simulate needs --profile or a config with 'profile' or 'model'");
    }();
    if (!a.config.empty()) run.input(a.config);

    const WaveProfile grid_profile = fit_to_grid(profile, config.m_x);
    Experiment ex;
    try {
        ex = run_experiment(grid_profile, config);
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: last finite time " << format_double(e.last_finite_time()) << '\n';
        throw;
    }
    if (ex.projection) write_trace(run, "trace_projection.csv", *ex.projection);
    if (ex.duhamel) write_trace(run, "trace_duhamel.csv", *ex.duhamel);
    if (a.snapshots) {
        const auto& traj = ex.trajectory;
        for (std::size_t j = 0; j < traj.t.size(); ++j) {
            char name[40];
            std::snprintf(name, sizeof name, "snapshots/u_%05zu.bin", j);
            write_snapshot(run.path(name), traj.u[j], traj.t[j]);
        }
    }
    Json report = to_json(ex.report);
    report["config"] = config_to_json(config);
    if (ex.duhamel) {
        report["duhamel"] = {{"iterations", ex.duhamel->iterations},
                             {"update_norm", ex.duhamel->update_norm},
                             {"v2_defect", ex.duhamel->v2_defect},
                             {"tol", config.duhamel_tol}};
    }
    write_json(report, run.path("report.json"));
    run.finish(config_to_json(config), ex.report.steps);

    const auto checks = experiment_checks(ex.report);
    std::printf("E0=%.3e delta_N=%.6g steps=%d\n", ex.report.E0, ex.report.delta_N, ex.report.steps);
    for (const auto& c : checks)
        std::printf("  %-24s %12.5g  %-14s %s\n", c.name.c_str(), c.value, c.bound.c_str(), c.pass ? "pass" : "fail");
    if (config.extraction == ExtractionMode::Both) std::printf("  extraction gap %.3e\n", ex.report.extraction_gap);
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Subharmonic stability of periodic wave trains", "subharm"};
    app.set_version_flag("--version", SUBHARM_VERSION);
    app.require_subcommand(1);

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "solve for a periodic profile");
    profile->add_option("--model", pa.model, "rgl, brusselator or nagumo")->required();
    profile->add_option("--param", pa.params, "model parameter key=value (repeatable)");
    profile->add_option("--modes", pa.modes, "Fourier truncation m_f")->check(CLI::PositiveNumber);
    profile->add_option("--guess", pa.guess, "analytic or file:PATH");
    profile->add_option("--solve-for", pa.solve_for)->check(CLI::IsMember({"c", "k"}));
    profile->add_option("--tol", pa.tol)->check(CLI::PositiveNumber);
    profile->add_option("--max-iter", pa.max_iter)->check(CLI::PositiveNumber);
    profile->add_option("--k", pa.k, "wavenumber of the default guess (0: model default)");
    profile->add_option("--out", pa.out);

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "diffusive stability report and critical curve");
    spectrum->add_option("--profile", sa.profile)->required();
    spectrum->add_option("--scan", sa.scan, "xi samples over [-pi, pi)")->check(CLI::PositiveNumber);
    spectrum->add_option("--modes", sa.modes, "Bloch truncation (0: max(32, m_f))")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--xi-max", sa.xi_max, "critical curve range (0: xi_1)")->check(CLI::Range(0.0, M_PI));
    spectrum->add_option("--samples", sa.samples, "critical curve points per side")->check(CLI::PositiveNumber);
    spectrum->add_option("--out-dir", sa.out_dir);

    GapArgs ga;
    auto* gap = app.add_subcommand("gap", "subharmonic spectral gap delta_N");
    gap->add_option("--profile", ga.profile)->required();
    gap->add_option("--N", ga.N, "period multiples, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
    gap->add_option("--modes", ga.modes)->check(CLI::NonNegativeNumber);
    gap->add_flag("--spectrum", ga.spectrum, "include the tagged spectrum");
    gap->add_option("--out-dir", ga.out_dir);

    LinearDecayArgs la;
    auto* linear = app.add_subcommand("linear-decay", "decay of the linear semigroup pieces");
    linear->add_option("--profile", la.profile)->required();
    linear->add_option("--N", la.N)->delimiter(',')->check(CLI::Range(2, 1 << 16));
    linear->add_option("--tmin", la.tmin, "start of the fit window")->check(CLI::PositiveNumber);
    linear->add_option("--tmax", la.tmax, "end of the fit window (0: max(N^2/10, 2 tmin))")->check(CLI::NonNegativeNumber);
    linear->add_option("--samples", la.samples)->check(CLI::Range(4, 100000));
    linear->add_option("--l", la.l)->check(CLI::NonNegativeNumber);
    linear->add_option("--m", la.m)->check(CLI::NonNegativeNumber);
    linear->add_option("--seed", la.seed);
    linear->add_option("--shape", la.shape)->check(CLI::IsMember({"localized", "bandlimited"}));
    linear->add_option("--m-x", la.m_x, "grid points per cell (odd)")->check(CLI::Range(3, 1025));
    linear->add_option("--out-dir", la.out_dir);

    SumBoundArgs ba;
    auto* sums = app.add_subcommand("sum-bounds", "uniform bounds on discrete heat-kernel sums");
    sums->add_option("--d", ba.d, "diffusion coefficient")->required()->check(CLI::PositiveNumber);
    sums->add_option("--r", ba.r)->delimiter(',')->check(CLI::Range(0, 8));
    sums->add_option("--N", ba.N)->delimiter(',')->check(CLI::PositiveNumber);
    sums->add_option("--tmax", ba.tmax)->check(CLI::PositiveNumber);
    sums->add_option("--samples", ba.samples)->check(CLI::Range(2, 1000000));
    sums->add_option("--out-dir", ba.out_dir);

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "nonlinear run with modulation diagnostics");
    simulate->add_option("--profile", ma.profile);
    simulate->add_option("--config", ma.config, "JSON simulation config");
    simulate->add_option("--extract", ma.extract)->check(CLI::IsMember({"projection", "duhamel", "both"}));
    simulate->add_option("--out-dir", ma.out_dir);
    simulate->add_flag("!--no-snapshots", ma.snapshots, "skip the binary snapshots");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*profile) return cmd_profile(pa);
        if (*spectrum) return cmd_spectrum(sa);
        if (*gap) return cmd_gap(ga);
        if (*linear) return cmd_linear_decay(la);
        if (*sums) return cmd_sum_bounds(ba);
        if (*simulate) return cmd_simulate(ma);
        return exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ArgumentError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_validation;
    } catch (const RangeError& e) {
        std::cerr << "out of range: " << e.what() << '\n';
        return exit_validation;
    } catch (const IOError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver failed: " << e.what() << " (final residual " << e.final_residual() << ")\n";
        return exit_solver;
    } catch (const DegenerateSolutionError& e) {
        std::cerr << "solver failed: " << e.what() << '\n';
        return exit_solver;
    } catch (const DivergenceError& e) {
        std::cerr << "extraction diverged: " << e.what() << '\n';
        return exit_divergence;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const Json::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_validation;
    }
}

}  // namespace subharm::cli
