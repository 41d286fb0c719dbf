// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include "oracles.hpp"

#include "subharm/evolve.hpp"
#include "subharm/linear_decay.hpp"
#include "subharm/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace subharm;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double q_stable = 0.3;
constexpr double q_unstable = 0.7;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const char* fmt, auto... args) {
        if (!detail.empty()) detail += "; ";
        if constexpr (sizeof...(args) == 0) {
            detail += fmt;
        } else {
            char buf[256];
            std::snprintf(buf, sizeof buf, fmt, args...);
            detail += buf;
        }
        if (!ok) {
            detail += " [x]";
            pass = false;
        }
    }
};

BlochOptions with_m(int m) {
    BlochOptions o;
    o.m = m;
    return o;
}

const WaveProfile& wave() {
    static const WaveProfile p = analytic_rgl_profile(q_stable, 16);
    return p;
}

const StabilityReport& stable_report() {
    static const StabilityReport r = verify_diffusive_stability(wave(), with_m(24));
    return r;
}

const CriticalCurve& curve() {
    static const CriticalCurve c = critical_curve(wave(), 0.2, 20, with_m(24));
    return c;
}

double max_amplitude(const WaveProfile& p) {
    const Eigen::MatrixXd s = sample_profile(p, 2048);
    return s.rowwise().norm().maxCoeff();
}

// ---------------------------------------------------------------------------

Outcome profile_exactness() {
    constexpr int modes = 32;
    constexpr double noise = 0.01, residual_tol = 1e-10, amplitude_tol = 1e-8;
    const WaveProfile exact = analytic_rgl_profile(q_stable, modes);
    WaveProfile guess = exact;
    CounterRng rng(11);
    for (auto& c : guess.coeffs)
        for (int l = 0; l < c.size(); ++l) c(l) += noise * cplx{rng.normal(), rng.normal()} * std::abs(c(l) + 0.1);
    const WaveProfile p = solve_profile(guess, ProfileUnknowns::CoeffsAndSpeed);
    const double amp = max_amplitude(p), target = std::sqrt(1.0 - q_stable * q_stable);
    Outcome o;
    o.require(p.residual_norm < residual_tol, "residual %.2e < %.0e", p.residual_norm, residual_tol);
    o.require(std::abs(amp - target) <= amplitude_tol, "|max amp - sqrt(1-q^2)| = %.2e <= %.0e", std::abs(amp - target),
              amplitude_tol);
    return o;
}

// closed-form Eckhaus test: min over a fine xi scan of -lambda_max / xi^2
double oracle_theta(double q) {
    double theta = INFINITY;
    for (int j = 1; j <= 2000; ++j) {
        const double xi = pi * j / 2000.0;
        theta = std::min(theta, -oracle::rgl_spectrum(q, xi, 30)[0] / (xi * xi));
    }
    return theta;
}

Outcome eckhaus_verdicts() {
    Outcome o;
    const auto& stable = stable_report();
    const auto unstable = verify_diffusive_stability(analytic_rgl_profile(q_unstable, 16), with_m(16));
    o.require(stable.verdict, "q=0.3 verdict %s", stable.verdict ? "true" : "false");
    o.require(!unstable.verdict && !unstable.quadratic_ok, "q=0.7 verdict %s, (ii) %s",
              unstable.verdict ? "true" : "false", unstable.quadratic_ok ? "holds" : "fails");
    for (double q : {q_stable, 0.55, 0.6, q_unstable}) {
        const bool analytic = q * q < 1.0 / 3.0;
        const bool scanned = oracle_theta(q) > 0.0;
        const bool computed = q == q_stable     ? stable.verdict
                              : q == q_unstable ? unstable.verdict
                                                : verify_diffusive_stability(analytic_rgl_profile(q, 16), with_m(16)).verdict;
        o.require(analytic == scanned && scanned == computed, "q=%.2f boundary/scan/computed %d%d%d", q, analytic,
                  scanned, computed);
    }
    return o;
}

Outcome critical_curve_check() {
    constexpr double a_tol = 1e-6, d_rel = 0.01, h = 0.02;
    const auto& c = curve();
    const double xi_1 = stable_report().xi_1;
    const double lp = critical_mode_data(wave(), h, xi_1, with_m(24)).lambda.real();
    const double l0 = critical_mode_data(wave(), 0.0, xi_1, with_m(24)).lambda.real();
    const double lm = critical_mode_data(wave(), -h, xi_1, with_m(24)).lambda.real();
    const double d_fd = -(lp - 2.0 * l0 + lm) / (2.0 * h * h);
    Outcome o;
    o.require(std::abs(c.a) < a_tol, "|a| = %.2e < %.0e", std::abs(c.a), a_tol);
    o.require(c.d > 0.0, "d = %.7f > 0", c.d);
    o.require(std::abs(c.d - d_fd) <= d_rel * d_fd, "second difference %.7f, rel %.2e <= %.2f", d_fd,
              std::abs(c.d - d_fd) / d_fd, d_rel);
    return o;
}

Outcome gap_asymptotics() {
    constexpr double rel_tol = 0.10;
    const double d = curve().d;
    Outcome o;
    for (int N : {32, 64}) {
        const double scaled = subharmonic_spectrum(wave(), N, with_m(24)).delta_N * N * N / (4 * pi * pi);
        o.require(std::abs(scaled - d) <= rel_tol * d, "N=%d delta_N N^2/4pi^2 = %.6f vs d %.6f", N, scaled, d);
    }
    double prev = INFINITY;
    bool monotone = true;
    for (int N : {2, 4, 8, 16}) {
        const double g = subharmonic_spectrum(wave(), N, with_m(24)).delta_N;
        monotone = monotone && g <= prev;
        prev = g;
    }
    o.require(monotone, "delta_N nonincreasing on 2,4,8,16");
    return o;
}

// Bloch data with |l| <= band on every xi, random normal coefficients
GridFunction random_bloch_field(int N, int L, int n, int band, std::uint64_t seed) {
    CounterRng rng(seed);
    auto dec = BlochDecomposition::zeros(N, L, n);
    for (auto& comp : dec.components)
        for (int c = 0; c < n; ++c)
            for (int l = -band; l <= band; ++l) comp(c * (2 * L + 1) + l + L) = cplx{rng.normal(), rng.normal()};
    return inverse_bloch(dec);
}

Outcome transform_identities() {
    constexpr double roundtrip_tol = 1e-12, parseval_tol = 1e-12, factor_tol = 1e-10;
    constexpr int m_x = 33, L = 16;
    double worst_rt = 0.0, worst_pv = 0.0, worst_fac = 0.0;
    for (int N : {1, 3, 8, 17}) {
        const GridFunction f = random_bloch_field(N, L, 2, L, 100 + N), g = random_bloch_field(N, L, 2, L, 200 + N);
        worst_rt = std::max(worst_rt, norm_l2(inverse_bloch(bloch_transform(f)) - f) / norm_l2(f));
        worst_pv = std::max(worst_pv, parseval_gap(f, g) / (norm_l2(f) * norm_l2(g)));

        // L v on the grid from pointwise derivatives and the Jacobian, compared with L_xi on each Bloch slice
        const GridFunction v = random_bloch_field(N, L, 2, L - 2, 300 + N);
        const GridFunction phi = profile_on_grid(wave(), N, m_x);
        GridFunction lv = wave().k * derivative(v, 2) + wave().c * derivative(v, 1);
        for (int j = 0; j < v.points(); ++j) {
            const Eigen::MatrixXd J = wave().model.jacobian(phi.values.row(j).real().transpose());
            lv.values.row(j) += (J * v.values.row(j).transpose()).transpose() / wave().k;
        }
        const auto lhs = bloch_transform(lv);
        const auto bv = bloch_transform(v);
        const auto grid = omega_grid(N);
        for (int i = 0; i < N; ++i) {
            const Eigen::VectorXcd rhs = assemble_bloch(wave(), grid.xi[i], L).entries * bv.components[i];
            worst_fac = std::max(worst_fac, (lhs.components[i] - rhs).norm() / std::max(rhs.norm(), 1e-300));
        }
    }
    Outcome o;
    o.require(worst_rt <= roundtrip_tol, "round trip %.2e", worst_rt);
    o.require(worst_pv <= parseval_tol, "Parseval %.2e", worst_pv);
    o.require(worst_fac <= factor_tol, "factorization %.2e", worst_fac);
    return o;
}

Outcome semigroup_kernel() {
    constexpr double tol = 1e-8;
    constexpr int m_x = 33;
    double worst_kernel = 0.0, worst_law = 0.0;
    for (int N : {4, 16}) {
        const SemigroupEngine engine(wave(), N, m_x, CutoffSpec{stable_report().xi_1});
        const GridFunction dphi = profile_on_grid(wave(), N, m_x, 1);
        for (double t : {1.0, 10.0}) worst_kernel = std::max(worst_kernel, norm_l2(engine.evolve(dphi, t) - dphi));
        PerturbationSpec spec;
        spec.amplitude = 1.0;
        spec.normalization = "l2";
        spec.seed = 5;
        const GridFunction v = make_perturbation(spec, N, m_x, 2);
        for (double t : {0.5, 3.0})
            for (double s : {0.5, 3.0})
                worst_law = std::max(worst_law, norm_l2(engine.evolve(v, t + s) - engine.evolve(engine.evolve(v, s), t)));
    }
    Outcome o;
    o.require(worst_kernel <= tol, "|e^{Lt}phi' - phi'| = %.2e", worst_kernel);
    o.require(worst_law <= tol, "semigroup law defect %.2e", worst_law);
    return o;
}

Outcome lattice_sums() {
    constexpr double constant_factor = 2.0, rate_rel = 0.10, tstar_factor = 1.5;
    const double d = curve().d;
    const std::vector<int> Ns{4, 8, 16, 32, 64, 128, 256};
    std::vector<double> t{0.0};
    for (double s : logspace(1e-2, 1e4, 400)) t.push_back(s);
    Outcome o;
    for (int r : {0, 1, 2}) {
        const auto table = sum_bound_check(d, r, Ns, t);
        const double ratio = table.c_global / table.c_continuum;
        o.require(ratio <= constant_factor && ratio >= 1.0 / constant_factor, "r=%d C/C_cont %.3f", r, ratio);
        double worst = 0.0;
        for (int N : Ns) {
            const auto p = crossover_probe(d, N, r);
            worst = std::max(worst, std::abs(p.late_rate / p.expected_rate - 1.0));
        }
        o.require(worst <= rate_rel, "r=%d late rate rel err %.1e", r, worst);
        const double scale = crossover_probe(d, 16, r).t_star / crossover_probe(d, 8, r).t_star;
        o.require(scale >= 4.0 / tstar_factor && scale <= 4.0 * tstar_factor, "r=%d t*(16)/t*(8) %.2f", r, scale);
    }
    return o;
}

Outcome linear_rates() {
    constexpr double sp_target = -0.25, sp_tol = 0.10, deriv_target = -0.75, deriv_tol = 0.15, uniform_factor = 2.0;
    std::vector<LinearDecayStudy> studies;
    for (int N : {4, 8, 16, 32, 64}) studies.push_back(linear_decay_study(wave(), N));
    const auto& s64 = studies.back();
    Outcome o;
    o.require(std::abs(s64.fit_sp.exponent - sp_target) <= sp_tol, "N=64 s_p slope %.3f", s64.fit_sp.exponent);
    o.require(std::abs(s64.fit_sp_x.exponent - deriv_target) <= deriv_tol, "d_x s_p %.3f", s64.fit_sp_x.exponent);
    o.require(std::abs(s64.fit_sp_t.exponent - deriv_target) <= deriv_tol, "d_t s_p %.3f", s64.fit_sp_t.exponent);
    o.require(std::abs(s64.fit_stilde.exponent - deriv_target) <= deriv_tol, "S~ %.3f", s64.fit_stilde.exponent);
    const std::pair<const char*, DecayFit LinearDecayStudy::*> fields[] = {{"s_p", &LinearDecayStudy::fit_sp},
                                                                          {"d_x s_p", &LinearDecayStudy::fit_sp_x},
                                                                          {"d_t s_p", &LinearDecayStudy::fit_sp_t},
                                                                          {"S~", &LinearDecayStudy::fit_stilde}};
    for (const auto& [name, field] : fields) {
        double lo = INFINITY, hi = 0.0;
        for (const auto& s : studies) {
            lo = std::min(lo, (s.*field).envelope_constant);
            hi = std::max(hi, (s.*field).envelope_constant);
        }
        o.require(hi <= uniform_factor * lo, "%s constants spread %.2f", name, hi / lo);
    }
    return o;
}

Outcome nonlinear_run() {
    constexpr double composite_slope = -0.6, zeta_factor = 4.0, gamma_t_slope = -1.2, gamma_factor = 10.0;
    constexpr double rate_lo = 0.5, rate_hi = 1.1;
    SimulationConfig c;
    c.N = 16;
    c.t_max = 4.0 * c.N * c.N;
    c.dt = 0.05;
    c.scheme = Scheme::ETDRK4Bloch;
    c.perturbation.amplitude = 1e-2;
    const auto ex = run_experiment(wave(), c);
    const auto& r = ex.report;
    Outcome o;
    const double comp = r.composite_fit ? r.composite_fit->exponent : NAN;
    o.require(comp <= composite_slope, "composite slope %.2f", comp);
    o.require(r.zeta_max <= zeta_factor * r.zeta_10, "zeta ratio %.2f", r.zeta_max / r.zeta_10);
    const double gt = r.phase ? r.phase->gamma_t_fit.exponent : NAN;
    o.require(gt <= gamma_t_slope, "gamma_t slope %.2f", gt);
    const double rel = r.phase ? std::abs(r.phase->gamma_inf - r.gamma_linear) / std::abs(r.gamma_linear) : NAN;
    o.require(rel <= gamma_factor * r.E0, "gamma_inf rel %.1e", rel);
    const double late = r.crossover ? r.crossover->late_rate / r.delta_N : NAN;
    o.require(late >= rate_lo && late <= rate_hi, "late rate %.3f delta_N", late);
    o.require(std::isfinite(r.damping_constant_half_gap) && r.damping && r.damping->violations == 0,
              "damping C %.2e, violations %d", r.damping_constant_half_gap, r.damping ? r.damping->violations : -1);
    return o;
}

Outcome extraction_equivalence() {
    constexpr double agreement = 1e-3, defect_factor = 10.0;
    SimulationConfig c;
    c.N = 16;
    c.t_max = 64.0;
    c.dt = 0.05;
    c.scheme = Scheme::ETDRK4Bloch;
    c.perturbation.amplitude = 1e-5;
    c.extraction = ExtractionMode::Both;
    const auto ex = run_experiment(wave(), c);
    Outcome o;
    o.require(ex.report.extraction_gap <= agreement, "projection vs duhamel %.2e", ex.report.extraction_gap);
    o.require(ex.duhamel->v2_defect <= defect_factor * c.duhamel_tol, "v equation defect %.2e", ex.duhamel->v2_defect);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"profile exactness", profile_exactness},
        {"Eckhaus verdicts", eckhaus_verdicts},
        {"critical curve", critical_curve_check},
        {"gap asymptotics", gap_asymptotics},
        {"transform identities", transform_identities},
        {"semigroup kernel", semigroup_kernel},
        {"lattice sum bounds", lattice_sums},
        {"linear decay rates", linear_rates},
        {"nonlinear run", nonlinear_run},
        {"extraction equivalence", extraction_equivalence},
    };
    int failures = 0, index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d %-24s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures;
}
