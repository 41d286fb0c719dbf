#include "subharm/grid.hpp"

#include "subharm/bloch.hpp"
#include "subharm/errors.hpp"

#include <cmath>
#include <numbers>

namespace subharm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_grid(int N, int m_x) {
    if (N < 1) throw ArgumentError("N must be positive");
    if (m_x < 1) throw ArgumentError("m_x must be positive");
}

Eigen::MatrixXcd column_fft(const Eigen::MatrixXcd& values, bool forward) {
    Eigen::MatrixXcd out(values.rows(), values.cols());
    for (int a = 0; a < values.cols(); ++a) {
        std::span<const cplx> in(values.col(a).data(), std::size_t(values.rows()));
        std::span<cplx> dst(out.col(a).data(), std::size_t(values.rows()));
        if (forward) fft_forward(in, dst);
        else fft_backward(in, dst);
    }
    return out;
}

}  // namespace

GridFunction::GridFunction(int N_, int m_x_, int n) : N(N_), m_x(m_x_) {
    check_grid(N, m_x);
    if (n < 1) throw ArgumentError("component count must be positive");
    values = Eigen::MatrixXcd::Zero(N * m_x, n);
}

GridFunction::GridFunction(int N_, int m_x_, Eigen::MatrixXcd vals) : N(N_), m_x(m_x_), values(std::move(vals)) {
    check_grid(N, m_x);
    if (values.rows() != N * m_x) throw ArgumentError("grid values must have N * m_x rows");
}

GridFunction GridFunction::from_real(int N_, int m_x_, const Eigen::MatrixXd& vals) {
    return {N_, m_x_, vals.cast<cplx>()};
}

double GridFunction::max_imag() const { return values.size() ? values.imag().cwiseAbs().maxCoeff() : 0.0; }

void check_compatible(const GridFunction& a, const GridFunction& b) {
    if (a.N != b.N || a.m_x != b.m_x || a.n() != b.n()) throw ArgumentError("grid functions are not compatible");
}

double grid_frequency(int slot, int N, int points) { return two_pi * signed_index(slot, points) / N; }

Eigen::MatrixXcd fourier_coefficients(const GridFunction& g) {
    return column_fft(g.values, true) / double(g.points());
}

GridFunction from_fourier(int N, int m_x, const Eigen::MatrixXcd& coeffs) {
    return {N, m_x, column_fft(coeffs, false)};
}

double norm_l1(const GridFunction& g) { return g.values.rowwise().norm().sum() * g.h(); }

double norm_l2(const GridFunction& g) { return std::sqrt(g.values.squaredNorm() * g.h()); }

double norm_hs(const GridFunction& g, double s) {
    const Eigen::MatrixXcd c = fourier_coefficients(g);
    const int P = g.points();
    double sum = 0.0;
    for (int j = 0; j < P; ++j) {
        const double w = grid_frequency(j, g.N, P);
        sum += std::pow(1.0 + w * w, s) * c.row(j).squaredNorm();
    }
    return std::sqrt(g.N * sum);
}

double norm_sup(const GridFunction& g) { return g.values.size() ? g.values.rowwise().norm().maxCoeff() : 0.0; }

cplx inner_l2(const GridFunction& f, const GridFunction& g) {
    check_compatible(f, g);
    cplx s{};
    for (int a = 0; a < f.n(); ++a) s += f.values.col(a).dot(g.values.col(a));
    return s * f.h();
}

GridFunction derivative(const GridFunction& g, int order) {
    if (order < 0) throw ArgumentError("derivative order must be nonnegative");
    if (order == 0) return g;
    Eigen::MatrixXcd c = fourier_coefficients(g);
    const int P = g.points();
    for (int j = 0; j < P; ++j) {
        if (P % 2 == 0 && j == P / 2 && order % 2 == 1) {
            c.row(j).setZero();
            continue;
        }
        const cplx f = std::pow(cplx{0.0, grid_frequency(j, g.N, P)}, order);
        c.row(j) *= f;
    }
    return from_fourier(g.N, g.m_x, c);
}

Eigen::MatrixXcd interpolate(const GridFunction& g, std::span<const double> points) {
    const Eigen::MatrixXcd c = fourier_coefficients(g);
    const int P = g.points();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(points.size(), g.n());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double x = points[i];
        // e^{i w x} by recurrence would drift for large P; evaluate each term directly
        for (int j = 0; j < P; ++j) {
            const double w = grid_frequency(j, g.N, P);
            cplx e = std::polar(1.0, w * x);
            if (P % 2 == 0 && j == P / 2) e = cplx{std::cos(w * x), 0.0};  // split Nyquist mode
            out.row(i) += e * c.row(j);
        }
    }
    return out;
}

GridFunction scale_by(const GridFunction& scalar, const GridFunction& g) {
    if (scalar.N != g.N || scalar.m_x != g.m_x || scalar.n() != 1) throw ArgumentError("scale_by needs a scalar field on the same grid");
    GridFunction out = g;
    for (int a = 0; a < g.n(); ++a) out.values.col(a).array() *= scalar.values.col(0).array();
    return out;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    return {a.N, a.m_x, a.values + b.values};
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    return {a.N, a.m_x, a.values - b.values};
}

GridFunction operator*(cplx s, const GridFunction& a) { return {a.N, a.m_x, s * a.values}; }

BlochDecomposition BlochDecomposition::zeros(int N, int L, int n) {
    BlochDecomposition d;
    d.N = N;
    d.L = L;
    d.n = n;
    d.components.assign(N, Eigen::VectorXcd::Zero(n * (2 * L + 1)));
    return d;
}

BlochDecomposition bloch_transform(const GridFunction& g) {
    if (g.m_x < 3 || g.m_x % 2 == 0) throw ArgumentError("Bloch transform needs an odd m_x >= 3");
    const int N = g.N, P = g.points(), L = (g.m_x - 1) / 2, n = g.n();
    const FrequencyGrid grid = omega_grid(N);
    const int j_lo = -grid.zero_index;
    const Eigen::MatrixXcd c = fourier_coefficients(g);
    BlochDecomposition d = BlochDecomposition::zeros(N, L, n);
    for (int idx = 0; idx < N; ++idx) {
        const int j = j_lo + idx;
        for (int a = 0; a < n; ++a)
            for (int l = -L; l <= L; ++l) d.components[idx](a * (2 * L + 1) + l + L) = double(N) * c(slot_of(j + l * N, P), a);
    }
    return d;
}

GridFunction inverse_bloch(const BlochDecomposition& dec) {
    const int N = dec.N, L = dec.L, m_x = 2 * L + 1, P = N * m_x;
    if (int(dec.components.size()) != N) throw ArgumentError("Bloch decomposition must have N components");
    const int j_lo = -omega_grid(N).zero_index;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(P, dec.n);
    for (int idx = 0; idx < N; ++idx) {
        const int j = j_lo + idx;
        for (int a = 0; a < dec.n; ++a)
            for (int l = -L; l <= L; ++l)
                c(slot_of(j + l * N, P), a) = dec.components[idx](a * (2 * L + 1) + l + L) / double(N);
    }
    return from_fourier(N, m_x, c);
}

double parseval_gap(const GridFunction& f, const GridFunction& g) {
    check_compatible(f, g);
    const cplx lhs = inner_l2(f, g);
    const auto bf = bloch_transform(f), bg = bloch_transform(g);
    cplx rhs{};
    for (int i = 0; i < f.N; ++i) rhs += bf.components[i].dot(bg.components[i]);
    return std::abs(lhs - rhs / double(f.N));
}

double bloch_norm_l2(const BlochDecomposition& dec) {
    double s = 0.0;
    for (const auto& v : dec.components) s += v.squaredNorm();
    return std::sqrt(s / dec.N);
}

double bloch_norm_hs(const BlochDecomposition& dec, double s) {
    const FrequencyGrid grid = omega_grid(dec.N);
    double sum = 0.0;
    const int w = dec.modes();
    for (int idx = 0; idx < dec.N; ++idx)
        for (int a = 0; a < dec.n; ++a)
            for (int l = -dec.L; l <= dec.L; ++l) {
                const double mu = grid.xi[idx] + two_pi * l;
                sum += std::pow(1.0 + mu * mu, s) * std::norm(dec.components[idx](a * w + l + dec.L));
            }
    return std::sqrt(sum / dec.N);
}

BlochDecomposition operator+(const BlochDecomposition& a, const BlochDecomposition& b) {
    if (a.N != b.N || a.L != b.L || a.n != b.n) throw ArgumentError("Bloch decompositions are not compatible");
    BlochDecomposition out = a;
    for (int i = 0; i < a.N; ++i) out.components[i] += b.components[i];
    return out;
}

BlochDecomposition operator-(const BlochDecomposition& a, const BlochDecomposition& b) {
    if (a.N != b.N || a.L != b.L || a.n != b.n) throw ArgumentError("Bloch decompositions are not compatible");
    BlochDecomposition out = a;
    for (int i = 0; i < a.N; ++i) out.components[i] -= b.components[i];
    return out;
}

}  // namespace subharm
