#include "oracles.hpp"

#include "subharm/errors.hpp"
#include "subharm/perturbation.hpp"
#include "subharm/semigroup.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace subharm;

namespace {

constexpr double pi = std::numbers::pi;
constexpr int m_x = 33;

const WaveProfile& wave() {
    static const WaveProfile p = analytic_rgl_profile(0.3, 16);
    return p;
}

const StabilityReport& report() {
    static const StabilityReport r = [] {
        BlochOptions o;
        o.m = 16;
        return verify_diffusive_stability(wave(), o);
    }();
    return r;
}

CutoffSpec cutoff() { return CutoffSpec{report().xi_1}; }

GridFunction random_v(int N, std::uint64_t seed, const std::string& shape = "localized") {
    PerturbationSpec spec;
    spec.shape = shape;
    spec.seed = seed;
    spec.amplitude = 1.0;
    spec.normalization = "l1";
    return make_perturbation(spec, N, m_x, 2);
}

double rel(const GridFunction& a, const GridFunction& b) { return norm_l2(a - b) / std::max(norm_l2(b), 1e-300); }

}  // namespace

TEST(Cutoff, Shape) {
    const CutoffSpec rho{2.0};
    EXPECT_EQ(rho(0.0), 1.0);
    EXPECT_EQ(rho(1.0), 1.0);
    EXPECT_EQ(rho(2.0), 0.0);
    EXPECT_EQ(rho(-2.5), 0.0);
    EXPECT_NEAR(rho(1.5), 0.5, 1e-15);
    for (double x : {0.3, 1.2, 1.7, 1.99}) EXPECT_EQ(rho(x), rho(-x));
    EXPECT_NEAR(rho(1.0 + 1e-9), 1.0, 1e-12);
    EXPECT_NEAR(rho(2.0 - 1e-9), 0.0, 1e-12);
}

TEST(Semigroup, TranslationModeIsStationary) {
    for (int N : {4, 16}) {
        const auto dphi = profile_on_grid(wave(), N, m_x, 1);
        const SemigroupEngine engine(wave(), N, m_x, cutoff());
        EXPECT_FALSE(engine.used_fallback());
        for (double t : {1.0, 10.0}) EXPECT_LE(norm_l2(engine.evolve(dphi, t) - dphi), 1e-8);
        const auto v = random_v(N, 3);
        EXPECT_LE(rel(engine.evolve(v, 0.0), v), 1e-12);
    }
}

TEST(Semigroup, SemigroupLaw) {
    const int N = 8;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    const auto v = random_v(N, 5);
    for (double t : {0.5, 2.0})
        for (double s : {0.5, 2.0}) {
            const auto lhs = engine.evolve(v, t + s);
            const auto rhs = engine.evolve(engine.evolve(v, s), t);
            EXPECT_LE(norm_l2(lhs - rhs), 1e-8 * norm_l2(v));
        }
    EXPECT_THROW(engine.evolve(v, -1.0), ArgumentError);
}

TEST(Semigroup, FreeFunctionMatchesEngine) {
    const int N = 4;
    const auto v = random_v(N, 9);
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    EXPECT_LE(rel(apply_semigroup(wave(), v, 3.0), engine.evolve(v, 3.0)), 1e-12);
}

TEST(Semigroup, ExponentialDecayOffKernel) {
    // after removing the translation mode the slowest mode is lambda_c(2 pi / N) = -delta_N
    const int N = 4;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    auto g = bloch_transform(random_v(N, 11, "bandlimited"));
    const std::size_t z = engine.grid().zero_index;
    g.components[z] -= engine.projection(g, z) * engine.phi(z);
    const double t1 = 60.0, t2 = 120.0;
    const double rate = -std::log(bloch_norm_l2(engine.evolve(g, t2)) / bloch_norm_l2(engine.evolve(g, t1))) / (t2 - t1);
    const double delta = -oracle::rgl_lambda_c(0.3, 2 * pi / N);
    EXPECT_NEAR(rate, delta, 0.1 * delta);
}

TEST(Semigroup, HighFrequencyPartDecaysFast) {
    const int N = 16;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    const auto g = bloch_transform(random_v(N, 13, "bandlimited"));
    const double t1 = 5.0, t2 = 15.0;
    const double n1 = bloch_norm_l2(engine.decompose(g, t1).high), n2 = bloch_norm_l2(engine.decompose(g, t2).high);
    const double rate = -std::log(n2 / n1) / (t2 - t1);
    // delta_0 at the inner edge of the cutoff transition
    double delta0 = 0.0;
    for (auto [r, d] : report().delta_0)
        if (r <= 0.5 * cutoff().xi_1) delta0 = d;
    ASSERT_GT(delta0, 0.0);
    EXPECT_GE(rate, 0.9 * delta0);
}

TEST(Decomposition, Reconstruction) {
    for (int N : {4, 16}) {
        const SemigroupEngine engine(wave(), N, m_x, cutoff());
        const auto v = random_v(N, 17 + N, "bandlimited");
        const auto g = bloch_transform(v);
        for (double t : {0.0, 1.0, 100.0}) {
            const auto p = engine.decompose(g, t);
            const auto sum = p.mean_term + p.phase_term + p.stilde;
            EXPECT_LE(bloch_norm_l2(sum - p.total), 1e-8 * bloch_norm_l2(p.total));
            const auto parts = p.high + p.low_tilde + p.critical_tilde;
            EXPECT_LE(bloch_norm_l2(parts - p.stilde), 1e-14 * bloch_norm_l2(p.total));
            // grid form: mean_phase phi' + phi' s_p + S~
            const auto d = decompose_semigroup(wave(), v, t, cutoff());
            const auto dphi = profile_on_grid(wave(), N, m_x, 1);
            const GridFunction rec = d.mean_phase * dphi + scale_by(d.sp, dphi) + d.stilde;
            EXPECT_LE(rel(rec, engine.evolve(v, t)), 1e-8);
        }
    }
}

TEST(Decomposition, TranslationModeIsPureMeanPhase) {
    const int N = 8;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    const auto dphi = profile_on_grid(wave(), N, m_x, 1);
    const auto p = engine.decompose(bloch_transform(dphi), 0.0);
    // (1/N) <Phi~_0, phi'>_{L^2_N} = <Phi~_0, phi'>_{L^2(0,1)} = 1
    EXPECT_NEAR(std::abs(p.mean_phase - 1.0), 0.0, 1e-10);
    EXPECT_LE(bloch_norm_l2(p.phase_term), 1e-10);
    EXPECT_LE(bloch_norm_l2(p.stilde), 1e-8);
}

TEST(Decomposition, HighFrequencyDataHasNoPhase) {
    const int N = 16;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    auto g = bloch_transform(random_v(N, 23, "bandlimited"));
    for (int i = 0; i < N; ++i)
        if (std::abs(engine.grid().xi[i]) < cutoff().xi_1) g.components[i].setZero();
    for (double t : {0.0, 5.0})
        for (auto c : engine.sp_coefficients(g, t)) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(PhaseSum, RealAndLinear) {
    const int N = 16;
    const auto v = random_v(N, 29);
    for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {0, 1}}) {
        const auto sp = sp_apply(wave(), v, 7.0, l, m, cutoff());
        EXPECT_EQ(sp.n(), 1);
        EXPECT_LE(sp.max_imag(), 1e-10 * std::max(1.0, norm_sup(sp)));
    }
    const GridFunction zero(N, m_x, 2);
    EXPECT_EQ(norm_l2(sp_apply(wave(), zero, 3.0, 0, 0, cutoff())), 0.0);
    EXPECT_THROW(sp_apply(wave(), v, 1.0, 5, 0, cutoff()), ArgumentError);
    // linearity
    const auto w = random_v(N, 31);
    const auto a = sp_apply(wave(), v, 2.0, 0, 0, cutoff()), b = sp_apply(wave(), w, 2.0, 0, 0, cutoff());
    const auto ab = sp_apply(wave(), v + cplx{2.0} * w, 2.0, 0, 0, cutoff());
    EXPECT_LE(norm_l2(ab - a - cplx{2.0} * b), 1e-12 * norm_l2(ab));
}

TEST(PhaseSum, TimeDerivativeMatchesDifference) {
    const int N = 16;
    const SemigroupEngine engine(wave(), N, m_x, cutoff());
    const auto g = bloch_transform(random_v(N, 37));
    const double t = 4.0, h = 1e-4;
    const auto fp = engine.lattice_field(engine.sp_coefficients(g, t + h));
    const auto fm = engine.lattice_field(engine.sp_coefficients(g, t - h));
    const auto dt = engine.lattice_field(engine.sp_coefficients(g, t, 0, 1));
    EXPECT_LE(norm_l2(cplx{1.0 / (2 * h)} * (fp - fm) - dt), 1e-6 * norm_l2(dt));
    const auto f0 = engine.lattice_field(engine.sp_coefficients(g, t));
    const auto dx = engine.lattice_field(engine.sp_coefficients(g, t, 1, 0));
    EXPECT_LE(norm_l2(derivative(f0) - dx), 1e-10 * norm_l2(dx));
}

TEST(Semigroup, CoarseGridRejected) {
    EXPECT_THROW(SemigroupEngine(wave(), 4, 9, cutoff()), ArgumentError);
    EXPECT_THROW(SemigroupEngine(wave(), 4, 34, cutoff()), ArgumentError);
}
