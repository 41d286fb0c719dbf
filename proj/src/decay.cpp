#include "subharm/decay.hpp"

#include "subharm/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace subharm {

namespace {

constexpr double pi = std::numbers::pi;

double sum_sq_residual(std::span<const double> x, std::span<const double> y, std::pair<double, double> ab) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - ab.first - ab.second * x[i];
        s += e * e;
    }
    return s;
}

}  // namespace

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("linear_fit needs two or more paired samples");
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ArgumentError("linear_fit: abscissae are all equal");
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

std::vector<double> upper_envelope(std::span<const double> y) {
    std::vector<double> env(y.begin(), y.end());
    for (std::size_t i = env.size(); i-- > 1;) env[i - 1] = std::max(env[i - 1], env[i]);
    return env;
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ArgumentError("logspace needs 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

DecayFit measure_decay(std::span<const double> t, std::span<const double> norms, double claimed_exponent,
                       double t_lo, double t_hi, const DecayFitOptions& options) {
    if (t.size() != norms.size()) throw ArgumentError("time and norm series differ in length");
    DecayFit fit;
    fit.t.assign(t.begin(), t.end());
    fit.norms.assign(norms.begin(), norms.end());
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.claimed_exponent = claimed_exponent;

    const std::vector<double> y = options.envelope ? upper_envelope(norms) : fit.norms;
    std::vector<double> lx, ly, tt;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        lx.push_back(std::log1p(t[i]));
        ly.push_back(std::log(y[i]));
        tt.push_back(t[i]);
    }
    fit.samples = int(lx.size());
    if (fit.samples < 10)
        throw ArgumentError("decay fit window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                            "] holds fewer than 10 positive samples");

    const auto power = linear_fit(lx, ly);
    fit.exponent = power.second;
    fit.constant = std::exp(power.first);
    const auto expo = linear_fit(tt, ly);
    const double r_pow = sum_sq_residual(lx, ly, power), r_exp = sum_sq_residual(tt, ly, expo);
    fit.super_polynomial = expo.second < 0.0 && r_exp < 0.1 * r_pow;

    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::isfinite(norms[i]))
            fit.envelope_constant = std::max(fit.envelope_constant, norms[i] * std::pow(1.0 + t[i], -claimed_exponent));
    return fit;
}

double log_lattice_sum(double d, int r, int N, double t) {
    if (N < 1) throw ArgumentError("N must be positive");
    if (r < 0) throw ArgumentError("r must be non-negative");
    // xi = 2 pi j / N with j in the symmetric range, j != 0; log-sum-exp keeps late times finite
    std::vector<double> logs;
    for (int j = -(N / 2); j <= (N - 1) / 2; ++j) {
        if (j == 0) continue;
        const double xi = 2.0 * pi * j / N;
        logs.push_back(2.0 * r * std::log(std::abs(xi)) - 2.0 * d * xi * xi * t);
    }
    if (logs.empty()) return -std::numeric_limits<double>::infinity();
    const double top = *std::max_element(logs.begin(), logs.end());
    double s = 0.0;
    for (double l : logs) s += std::exp(l - top);
    return top + std::log(s) - std::log(double(N));
}

double lattice_sum(double d, int r, int N, double t) { return std::exp(log_lattice_sum(d, r, N, t)); }

double continuum_sum(double d, int r, double t) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double xi) { return std::pow(xi, 2 * r) * std::exp(-2.0 * d * xi * xi * t); };
    // the peak width shrinks like t^{-1/2}; split there so the adaptive rule sees it
    const double w = std::min(pi, 8.0 / std::sqrt(std::max(2.0 * d * t, 1e-300)));
    double val = gauss_kronrod<double, 61>::integrate(f, 0.0, w, 15, 1e-13);
    if (w < pi) val += gauss_kronrod<double, 61>::integrate(f, w, pi, 15, 1e-13);
    return val / pi;
}

SumBoundTable sum_bound_check(double d, int r, std::span<const int> N_list, std::span<const double> t_grid) {
    if (!(d > 0.0)) throw ArgumentError("d must be positive");
    if (r < 0) throw ArgumentError("r must be non-negative");
    SumBoundTable table;
    for (int N : N_list) {
        double cmax = 0.0;
        for (double t : t_grid) {
            if (t < 0.0) throw ArgumentError("times must be non-negative");
            const double s = lattice_sum(d, r, N, t);
            const double ratio = s * std::pow(1.0 + t, r + 0.5);
            table.rows.push_back({N, r, t, s, ratio});
            cmax = std::max(cmax, ratio);
        }
        table.c_min.emplace_back(N, cmax);
        table.c_global = std::max(table.c_global, cmax);
    }
    for (double t : t_grid)
        table.c_continuum = std::max(table.c_continuum, continuum_sum(d, r, t) * std::pow(1.0 + t, r + 0.5));
    return table;
}

CrossoverProbe crossover_probe(double d, int N, int r, double t_max, int samples) {
    if (!(d > 0.0)) throw ArgumentError("d must be positive");
    if (N < 1) throw ArgumentError("N must be positive");
    CrossoverProbe probe;
    probe.N = N;
    probe.r = r;
    probe.expected_rate = 2.0 * d * std::pow(2.0 * pi / N, 2);
    if (N == 1) {
        probe.degenerate = true;
        return probe;
    }
    probe.t_max = t_max > 0.0 ? t_max : 2.0 * N * N / d;
    const auto t = logspace(1e-3, probe.t_max, samples);

    std::size_t knee = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (log_lattice_sum(d, r, N, t[i]) < std::log(0.5 * continuum_sum(d, r, t[i]))) {
            knee = i;
            break;
        }
    }
    if (knee == t.size()) throw RangeError("no crossover before t_max; increase t_max");
    probe.t_star = t[knee];

    std::vector<double> tt, ly;
    for (double s : t)
        if (s > 4.0 * probe.t_star) {
            tt.push_back(s);
            ly.push_back(log_lattice_sum(d, r, N, s));
        }
    if (tt.size() < 10 || tt.back() < 8.0 * probe.t_star)
        throw RangeError("horizon too short past the crossover; increase t_max");
    probe.late_rate = -linear_fit(tt, ly).second;
    return probe;
}

}  // namespace subharm
