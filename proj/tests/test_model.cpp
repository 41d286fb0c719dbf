#include "subharm/errors.hpp"
#include "subharm/model.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace subharm;

TEST(Model, RealGLValues) {
    const auto m = ReactionModel::real_gl();
    EXPECT_EQ(m.n(), 2);
    EXPECT_EQ(eval_f(m, Eigen::Vector2d(0, 0)), Eigen::Vector2d(0, 0));
    EXPECT_EQ(eval_f(m, Eigen::Vector2d(1, 0)), Eigen::Vector2d(0, 0));
    const Eigen::VectorXd f = eval_f(m, Eigen::Vector2d(0.5, 0));
    EXPECT_DOUBLE_EQ(f(0), 0.375);
    EXPECT_DOUBLE_EQ(f(1), 0.0);
}

TEST(Model, Jacobians) {
    const auto gl = ReactionModel::real_gl();
    EXPECT_TRUE(eval_jacobian(gl, Eigen::Vector2d(0, 0)).isApprox(Eigen::Matrix2d::Identity()));
    Eigen::Matrix2d expect;
    expect << -2, 0, 0, 0;
    EXPECT_TRUE(eval_jacobian(gl, Eigen::Vector2d(1, 0)).isApprox(expect));
    const auto nag = ReactionModel::nagumo(0.25);
    EXPECT_DOUBLE_EQ(eval_jacobian(nag, Eigen::VectorXd::Zero(1))(0, 0), -0.25);
}

TEST(Model, DimensionMismatch) {
    const auto gl = ReactionModel::real_gl();
    EXPECT_THROW(eval_f(gl, Eigen::VectorXd::Zero(3)), ArgumentError);
    EXPECT_THROW(eval_jacobian(gl, Eigen::VectorXd::Zero(1)), ArgumentError);
}

TEST(Model, Validation) {
    EXPECT_THROW(ReactionModel::brusselator(-1.0, 3.0), ArgumentError);
    EXPECT_THROW(ReactionModel::brusselator(1.0, 0.0), ArgumentError);
    EXPECT_THROW(ReactionModel::nagumo(1.5), ArgumentError);
    EXPECT_THROW(ReactionModel::real_gl(1.0), ArgumentError);
    EXPECT_THROW(ReactionModel::from_id("lorenz"), ArgumentError);
    EXPECT_THROW(ReactionModel::from_id("rgl", {{"alpha", 0.1}}), ArgumentError);
    EXPECT_EQ(ReactionModel::from_id("realGL").id(), "rgl");
    EXPECT_DOUBLE_EQ(ReactionModel::from_id("brusselator", {{"B", 2.5}}).param("B"), 2.5);
}

TEST(Model, FiniteDifferenceJacobian) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dir(-1.0, 1.0), rad(0.0, 2.0);
    const ReactionModel models[] = {ReactionModel::real_gl(), ReactionModel::brusselator(1.0, 3.0),
                                    ReactionModel::nagumo(0.25)};
    const double h = 1e-5;
    for (const auto& m : models) {
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd u(m.n());
            for (int i = 0; i < m.n(); ++i) u(i) = dir(rng);
            u *= rad(rng) / std::max(u.norm(), 1e-12);
            const Eigen::MatrixXd J = eval_jacobian(m, u);
            for (int b = 0; b < m.n(); ++b) {
                Eigen::VectorXd up = u, um = u;
                up(b) += h;
                um(b) -= h;
                const Eigen::VectorXd fd = (eval_f(m, up) - eval_f(m, um)) / (2 * h);
                for (int a = 0; a < m.n(); ++a) {
                    const double scale = std::max(std::abs(J(a, b)), 1.0);
                    EXPECT_LE(std::abs(fd(a) - J(a, b)) / scale, 1e-6) << m.id() << " entry " << a << b;
                }
            }
        }
    }
}

TEST(Model, Deterministic) {
    const auto m = ReactionModel::brusselator(1.0, 3.0);
    const Eigen::Vector2d u(0.123456789, -1.987654321);
    const Eigen::VectorXd a = eval_f(m, u), b = eval_f(m, u);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 2), 0);
}

TEST(Model, TaylorRemainder) {
    const ReactionModel models[] = {ReactionModel::real_gl(), ReactionModel::brusselator(1.0, 3.0),
                                    ReactionModel::nagumo(0.25)};
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& m : models) {
        const int n = m.n();
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXd u(n), w(n);
            for (int a = 0; a < n; ++a) {
                u(a) = U(gen);
                w(a) = 0.5 * U(gen);
            }
            const Eigen::VectorXd direct = m.f(u + w) - m.f(u) - m.jacobian(u) * w;
            Eigen::VectorXd r(n);
            m.remainder_inplace(u.data(), w.data(), r.data());
            EXPECT_LE((r - direct).norm(), 1e-13) << m.id();
            // second order: halving w quarters the remainder up to the cubic part
            const Eigen::VectorXd tiny = 1e-6 * w;
            m.remainder_inplace(u.data(), tiny.data(), r.data());
            Eigen::VectorXd r2(n);
            const Eigen::VectorXd tinier = 0.5 * tiny;
            m.remainder_inplace(u.data(), tinier.data(), r2.data());
            if (r.norm() > 0.0) EXPECT_NEAR(r2.norm() / r.norm(), 0.25, 1e-5) << m.id();
        }
    }
}
