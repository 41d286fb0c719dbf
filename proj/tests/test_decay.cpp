#include "subharm/decay.hpp"
#include "subharm/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace subharm;

namespace {

constexpr double pi = std::numbers::pi;

// (1/pi) int_0^pi xi^{2r} e^{-a xi^2} = a^{-r-1/2} gamma_lower(r + 1/2, a pi^2) / (2 pi)
double continuum_closed_form(double d, int r, double t) {
    if (t == 0.0) return std::pow(pi, 2 * r) / (2 * r + 1);
    const double a = 2 * d * t;
    return std::pow(a, -r - 0.5) * boost::math::tgamma_lower(r + 0.5, a * pi * pi) / (2 * pi);
}

double direct_sum(double d, int r, int N, double t) {
    double s = 0.0;
    for (int j = 1; j < N; ++j) {
        double xi = 2 * pi * j / N;
        if (xi > pi) xi -= 2 * pi;
        s += std::pow(xi, 2 * r) * std::exp(-2 * d * xi * xi * t);
    }
    return s / N;
}

std::vector<double> time_grid() {
    auto t = logspace(1e-3, 1e4, 400);
    t.insert(t.begin(), 0.0);
    return t;
}

}  // namespace

TEST(DecayFit, ExactPowerLaw) {
    const auto t = logspace(1.0, 1e3, 200);
    std::vector<double> y;
    for (double s : t) y.push_back(2.5 * std::pow(1 + s, -0.75));
    const auto fit = measure_decay(t, y, -0.75, 10.0, 1e3);
    EXPECT_NEAR(fit.exponent, -0.75, 1e-6);
    EXPECT_NEAR(fit.constant, 2.5, 1e-6);
    EXPECT_NEAR(fit.envelope_constant, 2.5, 1e-12);
    EXPECT_FALSE(fit.super_polynomial);
    EXPECT_EQ(fit.t_lo, 10.0);
    EXPECT_EQ(fit.t_hi, 1e3);
}

TEST(DecayFit, ExponentialFlagged) {
    const auto t = logspace(1.0, 60.0, 200);
    std::vector<double> y;
    for (double s : t) y.push_back(std::exp(-s));
    const auto fit = measure_decay(t, y, -0.75, 10.0, 60.0);
    EXPECT_LT(fit.exponent, -10.0);
    EXPECT_TRUE(fit.super_polynomial);
}

TEST(DecayFit, EnvelopeOfOscillation) {
    const auto t = logspace(1.0, 1e3, 500);
    std::vector<double> y;
    for (double s : t) y.push_back(std::pow(1 + s, -1.5) * std::abs(std::cos(s)));
    const auto fit = measure_decay(t, y, -1.5, 10.0, 1e3, {.envelope = true});
    EXPECT_NEAR(fit.exponent, -1.5, 0.05);
}

TEST(DecayFit, WindowTooSmall) {
    const std::vector<double> t{1, 2, 3}, y{1, 1, 1};
    EXPECT_THROW(measure_decay(t, y, 0.0, 10.0, 20.0), ArgumentError);
}

TEST(LatticeSum, SmallCases) {
    EXPECT_DOUBLE_EQ(lattice_sum(1.0, 0, 2, 0.0), 0.5);
    for (int N : {3, 7, 16}) EXPECT_NEAR(lattice_sum(0.3, 0, N, 0.0), double(N - 1) / N, 1e-15);
    EXPECT_EQ(lattice_sum(1.0, 0, 1, 5.0), 0.0);
    for (int r : {0, 1, 2})
        for (int N : {4, 9, 64})
            for (double t : {0.0, 0.3, 7.0, 300.0})
                EXPECT_NEAR(lattice_sum(0.7, r, N, t), direct_sum(0.7, r, N, t), 1e-13 * std::pow(pi, 2 * r));
    // short-time bound
    for (int r : {0, 1, 2}) EXPECT_LE(lattice_sum(1.0, r, 64, 0.0), std::pow(pi, 2 * r));
}

TEST(LatticeSum, ContinuumQuadrature) {
    for (int r : {0, 1, 2})
        for (double t : {0.0, 1e-2, 1.0, 50.0, 1e4}) {
            const double ref = continuum_closed_form(0.5, r, t);
            EXPECT_NEAR(continuum_sum(0.5, r, t), ref, 1e-10 * ref);
        }
}

TEST(SumBound, GlobalConstant) {
    const std::vector<int> Ns{4, 8, 16, 32, 64, 128, 256};
    const auto t = time_grid();
    for (double d : {1.0, 0.0383}) {
        for (int r : {0, 1, 2}) {
            const auto table = sum_bound_check(d, r, Ns, t);
            ASSERT_EQ(table.rows.size(), Ns.size() * t.size());
            EXPECT_TRUE(std::isfinite(table.c_global));
            double cont = 0.0;
            for (double s : t) cont = std::max(cont, continuum_closed_form(d, r, s) * std::pow(1 + s, r + 0.5));
            EXPECT_NEAR(table.c_continuum, cont, 1e-8 * cont);
            EXPECT_LE(table.c_global, 2.0 * cont) << "d=" << d << " r=" << r;
            EXPECT_GE(table.c_global, 0.5 * cont) << "d=" << d << " r=" << r;
        }
    }
    EXPECT_THROW(sum_bound_check(0.0, 0, Ns, t), ArgumentError);
}

TEST(Crossover, LateRateAndScaling) {
    const auto p8 = crossover_probe(1.0, 8, 1);
    EXPECT_NEAR(p8.expected_rate, 2 * std::pow(2 * pi / 8, 2), 1e-14);
    EXPECT_NEAR(p8.expected_rate, 1.2337, 1e-4);
    EXPECT_NEAR(p8.late_rate, p8.expected_rate, 0.1 * p8.expected_rate);
    const auto p16 = crossover_probe(1.0, 16, 1);
    EXPECT_NEAR(p16.late_rate, p16.expected_rate, 0.1 * p16.expected_rate);
    const double ratio = p16.t_star / p8.t_star;
    EXPECT_GE(ratio, 4.0 / 1.5);
    EXPECT_LE(ratio, 4.0 * 1.5);
}

TEST(Crossover, Degenerate) {
    const auto p = crossover_probe(1.0, 1, 0);
    EXPECT_TRUE(p.degenerate);
    EXPECT_THROW(crossover_probe(1.0, 64, 0, 1e-2), RangeError);
}
