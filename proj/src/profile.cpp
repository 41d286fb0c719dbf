#include "subharm/profile.hpp"

#include "subharm/errors.hpp"

#include <cmath>
#include <numbers>

namespace subharm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx deriv_factor(int l, int order) {
    cplx f{1.0, 0.0};
    const cplx step{0.0, two_pi * l};
    for (int i = 0; i < order; ++i) f *= step;
    return f;
}

int grid_size(int m_f) { return 2 * (2 * m_f + 1); }

// Values of one component on a uniform grid of P points from modes [-m, m].
void synthesize(const Eigen::VectorXcd& modes, int m, int deriv, std::vector<cplx>& scratch, double* out, int P) {
    std::fill(scratch.begin(), scratch.end(), cplx{});
    for (int l = -m; l <= m; ++l) scratch[slot_of(l, P)] = modes(l + m) * deriv_factor(l, deriv);
    fft_backward(std::span<const cplx>(scratch), std::span<cplx>(scratch));
    for (int j = 0; j < P; ++j) out[j] = scratch[j].real();
}

// Modes [-m, m] of a real grid function of P points (P > 2m).
void analyze(const double* values, int P, int m, std::vector<cplx>& scratch, Eigen::Ref<Eigen::VectorXcd> out) {
    for (int j = 0; j < P; ++j) scratch[j] = values[j];
    fft_forward(std::span<const cplx>(scratch), std::span<cplx>(scratch));
    for (int l = -m; l <= m; ++l) out(l + m) = scratch[slot_of(l, P)] / double(P);
}

// Real packing of Hermitian coefficients per component: [a0, Re a1..a_m, Im a1..a_m].
int packed_size(int n, int m) { return n * (2 * m + 1); }

Eigen::VectorXd pack(const std::vector<Eigen::VectorXcd>& coeffs, int m) {
    const int n = int(coeffs.size());
    Eigen::VectorXd x(packed_size(n, m));
    for (int a = 0; a < n; ++a) {
        const int base = a * (2 * m + 1);
        x(base) = coeffs[a](m).real();
        for (int l = 1; l <= m; ++l) {
            x(base + l) = coeffs[a](m + l).real();
            x(base + m + l) = coeffs[a](m + l).imag();
        }
    }
    return x;
}

void unpack(const Eigen::VectorXd& x, int n, int m, std::vector<Eigen::VectorXcd>& coeffs) {
    coeffs.assign(n, Eigen::VectorXcd::Zero(2 * m + 1));
    for (int a = 0; a < n; ++a) {
        const int base = a * (2 * m + 1);
        coeffs[a](m) = x(base);
        for (int l = 1; l <= m; ++l) {
            const cplx v{x(base + l), x(base + m + l)};
            coeffs[a](m + l) = v;
            coeffs[a](m - l) = std::conj(v);
        }
    }
}

// Dealiased Galerkin evaluation of k^2 u'' + k c u' + g on modes [-m, m], where g is
// either f(phi) or Df(phi) u. Works on a grid of 2(2m+1) points, exact for cubics.
class GalerkinOperator {
public:
    GalerkinOperator(const ReactionModel& model, int m)
        : model_(model), n_(model.n()), m_(m), P_(grid_size(m)), scratch_(P_), phi_(n_ * P_), jac_(n_ * n_ * P_) {}

    void set_state(const std::vector<Eigen::VectorXcd>& coeffs) {
        for (int a = 0; a < n_; ++a) synthesize(coeffs[a], m_, 0, scratch_, &phi_[a * P_], P_);
        std::vector<double> u(n_), J(n_ * n_);
        for (int j = 0; j < P_; ++j) {
            for (int a = 0; a < n_; ++a) u[a] = phi_[a * P_ + j];
            model_.jacobian_inplace(u.data(), J.data());
            for (int e = 0; e < n_ * n_; ++e) jac_[e * P_ + j] = J[e];
        }
    }

    // Residual coefficients of the profile equation.
    std::vector<Eigen::VectorXcd> residual(const std::vector<Eigen::VectorXcd>& coeffs, double k, double c) {
        std::vector<double> fvals(n_ * P_), u(n_), fu(n_);
        for (int j = 0; j < P_; ++j) {
            for (int a = 0; a < n_; ++a) u[a] = phi_[a * P_ + j];
            model_.f_inplace(u.data(), fu.data());
            for (int a = 0; a < n_; ++a) fvals[a * P_ + j] = fu[a];
        }
        std::vector<Eigen::VectorXcd> out(n_, Eigen::VectorXcd(2 * m_ + 1));
        for (int a = 0; a < n_; ++a) {
            analyze(&fvals[a * P_], P_, m_, scratch_, out[a]);
            for (int l = -m_; l <= m_; ++l)
                out[a](l + m_) += (k * k * deriv_factor(l, 2) + k * c * deriv_factor(l, 1)) * coeffs[a](l + m_);
        }
        return out;
    }

    // Linearization applied to a direction.
    std::vector<Eigen::VectorXcd> linearized(const std::vector<Eigen::VectorXcd>& dir, double k, double c) {
        std::vector<double> dvals(n_ * P_), prod(n_ * P_, 0.0);
        for (int a = 0; a < n_; ++a) synthesize(dir[a], m_, 0, scratch_, &dvals[a * P_], P_);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                for (int j = 0; j < P_; ++j) prod[a * P_ + j] += jac_[(a * n_ + b) * P_ + j] * dvals[b * P_ + j];
        std::vector<Eigen::VectorXcd> out(n_, Eigen::VectorXcd(2 * m_ + 1));
        for (int a = 0; a < n_; ++a) {
            analyze(&prod[a * P_], P_, m_, scratch_, out[a]);
            for (int l = -m_; l <= m_; ++l)
                out[a](l + m_) += (k * k * deriv_factor(l, 2) + k * c * deriv_factor(l, 1)) * dir[a](l + m_);
        }
        return out;
    }

private:
    const ReactionModel& model_;
    int n_, m_, P_;
    std::vector<cplx> scratch_;
    std::vector<double> phi_;
    std::vector<double> jac_;
};

double coeff_norm(const std::vector<Eigen::VectorXcd>& coeffs) {
    double s = 0.0;
    for (const auto& v : coeffs) s += v.squaredNorm();
    return std::sqrt(s);
}

void check_shape(const WaveProfile& p) {
    if (p.m_f < 0) throw ArgumentError("m_f must be nonnegative");
    if (int(p.coeffs.size()) != p.n()) throw ArgumentError("coefficient component count does not match model");
    for (const auto& v : p.coeffs)
        if (v.size() != p.modes()) throw ArgumentError("coefficient vector length must be 2 m_f + 1");
}

}  // namespace

Eigen::VectorXcd WaveProfile::stacked(int order) const { return stacked_padded(m_f, order); }

Eigen::VectorXcd WaveProfile::stacked_padded(int m, int order) const {
    if (m < m_f) throw ArgumentError("padding order below m_f");
    const int w = 2 * m + 1;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n() * w);
    for (int a = 0; a < n(); ++a)
        for (int l = -m_f; l <= m_f; ++l) out(a * w + l + m) = coeffs[a](l + m_f) * deriv_factor(l, order);
    return out;
}

WaveProfile analytic_rgl_profile(double q, int m_f) {
    if (m_f < 1) throw ArgumentError("analytic wave needs m_f >= 1");
    WaveProfile p{ReactionModel::real_gl(q), q / two_pi, 0.0, m_f, {}, 0.0};
    const double amp = std::sqrt(1.0 - q * q);
    p.coeffs.assign(2, Eigen::VectorXcd::Zero(2 * m_f + 1));
    // cos(2 pi y) = (e + e^-1)/2, sin(2 pi y) = (e - e^-1)/(2i)
    p.coeffs[0](m_f + 1) = p.coeffs[0](m_f - 1) = amp / 2.0;
    p.coeffs[1](m_f + 1) = cplx{0.0, -amp / 2.0};
    p.coeffs[1](m_f - 1) = cplx{0.0, amp / 2.0};
    p.residual_norm = profile_residual(p);
    return p;
}

WaveProfile default_guess(const ReactionModel& model, int m_f, double k, double amplitude) {
    if (m_f < 1) throw ArgumentError("m_f must be positive");
    switch (model.kind()) {
    case ReactionModel::Kind::RealGinzburgLandau: {
        auto p = analytic_rgl_profile(model.param("q"), m_f);
        if (k > 0.0) p.k = k;
        return p;
    }
    case ReactionModel::Kind::Brusselator: {
        const double A = model.param("A"), B = model.param("B");
        Eigen::Matrix2d J;
        J << B - 1.0, A * A, -B, -A * A;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(J.cast<cplx>());
        int idx = es.eigenvalues()(0).imag() >= es.eigenvalues()(1).imag() ? 0 : 1;
        const cplx mu = es.eigenvalues()(idx);
        if (!(mu.real() > 0.0) || std::abs(mu.imag()) < 1e-12)
            throw ArgumentError("brusselator equilibrium has no unstable oscillatory mode (need B > 1 + A^2)");
        if (k <= 0.0) k = std::sqrt(0.5 * mu.real()) / two_pi;
        if (amplitude <= 0.0) amplitude = 0.3;
        Eigen::Vector2cd v = es.eigenvectors().col(idx);
        v /= v.norm();
        // linear dispersion: Df v = (kappa^2 - i kappa c) v with kappa = 2 pi k
        WaveProfile p{model, k, -mu.imag() / (two_pi * k), m_f, {}, 0.0};
        p.coeffs.assign(2, Eigen::VectorXcd::Zero(2 * m_f + 1));
        p.coeffs[0](m_f) = A;
        p.coeffs[1](m_f) = B / A;
        for (int a = 0; a < 2; ++a) {
            p.coeffs[a](m_f + 1) = amplitude * v(a);
            p.coeffs[a](m_f - 1) = std::conj(amplitude * v(a));
        }
        p.residual_norm = profile_residual(p);
        return p;
    }
    case ReactionModel::Kind::Nagumo: {
        const double alpha = model.param("alpha");
        if (k <= 0.0) k = 0.95 * std::sqrt(alpha * (1.0 - alpha)) / two_pi;
        if (amplitude <= 0.0) amplitude = 0.1;
        WaveProfile p{model, k, 0.0, m_f, {Eigen::VectorXcd::Zero(2 * m_f + 1)}, 0.0};
        p.coeffs[0](m_f) = alpha;
        p.coeffs[0](m_f + 1) = p.coeffs[0](m_f - 1) = amplitude / 2.0;
        p.residual_norm = profile_residual(p);
        return p;
    }
    }
    throw ArgumentError("unknown model kind");
}

double derivative_norm(const WaveProfile& profile) { return profile.stacked(1).norm(); }

WaveProfile solve_profile(const WaveProfile& guess, ProfileUnknowns unknowns, const ProfileSolveOptions& options,
                          std::vector<double>* history) {
    check_shape(guess);
    if (guess.m_f < 8) throw ArgumentError("solve_profile requires m_f >= 8");
    if (!(options.tol > 0.0) || options.max_iter < 1) throw ArgumentError("invalid solver options");
    if (derivative_norm(guess) < options.derivative_floor)
        throw DegenerateSolutionError("guess is constant: |phi'| below floor");

    const int n = guess.n();
    const int m = guess.m_f;
    const int nc = packed_size(n, m);
    const bool free_speed = unknowns == ProfileUnknowns::CoeffsAndSpeed;

    // Phase pinning row against the guess derivative.
    std::vector<Eigen::VectorXcd> gd(n, Eigen::VectorXcd(2 * m + 1));
    for (int a = 0; a < n; ++a)
        for (int l = -m; l <= m; ++l) gd[a](l + m) = guess.coeffs[a](l + m) * deriv_factor(l, 1);
    Eigen::RowVectorXd phase_row = Eigen::RowVectorXd::Zero(nc + 1);
    for (int a = 0; a < n; ++a) {
        const int base = a * (2 * m + 1);
        for (int l = 1; l <= m; ++l) {
            phase_row(base + l) = 2.0 * gd[a](m + l).real();
            phase_row(base + m + l) = 2.0 * gd[a](m + l).imag();
        }
    }

    WaveProfile p = guess;
    Eigen::VectorXd x(nc + 1);
    x.head(nc) = pack(p.coeffs, m);
    x(nc) = free_speed ? p.c : p.k;

    GalerkinOperator op(p.model, m);
    auto residual_vector = [&](const Eigen::VectorXd& xv, std::vector<Eigen::VectorXcd>& coeffs, double& k, double& c) {
        unpack(xv.head(nc), n, m, coeffs);
        if (free_speed) c = xv(nc); else k = xv(nc);
        op.set_state(coeffs);
        const auto r = op.residual(coeffs, k, c);
        Eigen::VectorXd rv(nc + 1);
        rv.head(nc) = pack(r, m);
        rv(nc) = phase_row.head(nc).dot(xv.head(nc));
        return std::pair{rv, coeff_norm(r)};
    };

    double k = p.k, c = p.c;
    std::vector<Eigen::VectorXcd> coeffs;
    auto [rv, rnorm] = residual_vector(x, coeffs, k, c);
    if (history) history->push_back(rnorm);

    int iter = 0;
    while (!(rnorm < options.tol && std::abs(rv(nc)) < options.tol)) {
        if (iter++ >= options.max_iter || !std::isfinite(rnorm))
            throw ConvergenceError("profile Newton did not converge in " + std::to_string(options.max_iter) + " iterations",
                                   rnorm);
        Eigen::MatrixXd J(nc + 1, nc + 1);
        std::vector<Eigen::VectorXcd> dir(n, Eigen::VectorXcd::Zero(2 * m + 1));
        for (int col = 0; col < nc; ++col) {
            const int a = col / (2 * m + 1);
            const int r = col % (2 * m + 1);
            for (auto& d : dir) d.setZero();
            if (r == 0) {
                dir[a](m) = 1.0;
            } else if (r <= m) {
                dir[a](m + r) = dir[a](m - r) = 1.0;
            } else {
                const int l = r - m;
                dir[a](m + l) = cplx{0.0, 1.0};
                dir[a](m - l) = cplx{0.0, -1.0};
            }
            J.block(0, col, nc, 1) = pack(op.linearized(dir, k, c), m);
        }
        std::vector<Eigen::VectorXcd> dscalar(n, Eigen::VectorXcd(2 * m + 1));
        for (int a = 0; a < n; ++a)
            for (int l = -m; l <= m; ++l)
                dscalar[a](l + m) = free_speed ? k * deriv_factor(l, 1) * coeffs[a](l + m)
                                               : (2.0 * k * deriv_factor(l, 2) + c * deriv_factor(l, 1)) * coeffs[a](l + m);
        J.block(0, nc, nc, 1) = pack(dscalar, m);
        J.row(nc) = phase_row;

        const Eigen::VectorXd dx = J.partialPivLu().solve(rv);
        if (!dx.allFinite()) throw ConvergenceError("singular Newton system", rnorm);
        x -= dx;
        std::tie(rv, rnorm) = residual_vector(x, coeffs, k, c);
        if (history) history->push_back(rnorm);
    }

    p.coeffs = std::move(coeffs);
    p.k = k;
    p.c = c;
    if (derivative_norm(p) < options.derivative_floor)
        throw DegenerateSolutionError("Newton converged to a constant state");
    p.residual_norm = profile_residual(p);
    if (!(p.residual_norm < options.tol))
        throw ConvergenceError("collocation residual above tolerance; increase m_f", p.residual_norm);
    return p;
}

std::vector<WaveProfile> continue_profile(const WaveProfile& profile, const std::string& param, double target,
                                          int steps, ProfileUnknowns unknowns, const ProfileSolveOptions& options) {
    if (steps < 0) throw ArgumentError("steps must be nonnegative");
    if (steps == 0) return {profile};
    const bool is_k = param == "k", is_c = param == "c";
    if (!is_k && !is_c && !profile.model.has_param(param))
        throw ArgumentError("model has no parameter '" + param + "'");
    if ((is_c && unknowns == ProfileUnknowns::CoeffsAndSpeed) ||
        (is_k && unknowns == ProfileUnknowns::CoeffsAndWavenumber))
        throw ArgumentError("cannot continue in the free unknown '" + param + "'");
    const bool rgl_q = param == "q" && profile.model.kind() == ReactionModel::Kind::RealGinzburgLandau;

    const double start = is_k ? profile.k : is_c ? profile.c : profile.model.param(param);
    std::vector<WaveProfile> out;
    out.reserve(steps);
    WaveProfile current = profile;
    double last_good = start;
    for (int s = 1; s <= steps; ++s) {
        const double value = start + (target - start) * double(s) / steps;
        try {
            WaveProfile guess = current;
            if (is_k) guess.k = value;
            else if (is_c) guess.c = value;
            else {
                guess.model = current.model.with_param(param, value);
                if (rgl_q) guess.k = value / two_pi;
            }
            current = solve_profile(guess, unknowns, options);
        } catch (const std::exception& e) {
            throw ContinuationError("continuation failed at " + param + " = " + std::to_string(value) + ": " + e.what(),
                                    last_good);
        }
        last_good = value;
        out.push_back(current);
    }
    return out;
}

Eigen::MatrixXd evaluate_profile(const WaveProfile& profile, std::span<const double> points, int deriv) {
    check_shape(profile);
    if (deriv < 0 || deriv > 4) throw ArgumentError("deriv must lie in [0, 4]");
    const int m = profile.m_f;
    Eigen::MatrixXd out(points.size(), profile.n());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double x = points[i] - std::floor(points[i]);
        for (int a = 0; a < profile.n(); ++a) {
            double v = profile.coeffs[a](m).real() * (deriv == 0 ? 1.0 : 0.0);
            for (int l = 1; l <= m; ++l)
                v += 2.0 * (profile.coeffs[a](m + l) * deriv_factor(l, deriv) * std::polar(1.0, two_pi * l * x)).real();
            out(i, a) = v;
        }
    }
    return out;
}

Eigen::MatrixXd sample_profile(const WaveProfile& profile, int points, int deriv) {
    check_shape(profile);
    if (points <= 2 * profile.m_f) throw ArgumentError("too few sample points for the truncation order");
    std::vector<cplx> scratch(points);
    std::vector<double> col(points);
    Eigen::MatrixXd out(points, profile.n());
    for (int a = 0; a < profile.n(); ++a) {
        synthesize(profile.coeffs[a], profile.m_f, deriv, scratch, col.data(), points);
        for (int j = 0; j < points; ++j) out(j, a) = col[j];
    }
    return out;
}

double profile_residual(const WaveProfile& profile) {
    check_shape(profile);
    const int n = profile.n();
    const int P = grid_size(std::max(profile.m_f, 1));
    const Eigen::MatrixXd u = sample_profile(profile, P, 0);
    const Eigen::MatrixXd u1 = sample_profile(profile, P, 1);
    const Eigen::MatrixXd u2 = sample_profile(profile, P, 2);
    std::vector<double> fu(n);
    double sum = 0.0;
    for (int j = 0; j < P; ++j) {
        const Eigen::VectorXd row = u.row(j).transpose();
        profile.model.f_inplace(row.data(), fu.data());
        for (int a = 0; a < n; ++a) {
            const double r = profile.k * profile.k * u2(j, a) + profile.k * profile.c * u1(j, a) + fu[a];
            sum += r * r;
        }
    }
    return std::sqrt(sum / P);
}

WaveProfile shift_profile(const WaveProfile& profile, double s) {
    check_shape(profile);
    WaveProfile out = profile;
    for (auto& v : out.coeffs)
        for (int l = -profile.m_f; l <= profile.m_f; ++l) v(l + profile.m_f) *= std::polar(1.0, two_pi * l * s);
    return out;
}

WaveProfile resample_profile(const WaveProfile& profile, int m_f) {
    check_shape(profile);
    if (m_f < 0) throw ArgumentError("m_f must be nonnegative");
    WaveProfile out = profile;
    out.m_f = m_f;
    for (int a = 0; a < profile.n(); ++a) {
        out.coeffs[a] = Eigen::VectorXcd::Zero(2 * m_f + 1);
        for (int l = -std::min(m_f, profile.m_f); l <= std::min(m_f, profile.m_f); ++l)
            out.coeffs[a](l + m_f) = profile.coeffs[a](l + profile.m_f);
    }
    out.residual_norm = profile_residual(out);
    return out;
}

std::vector<Eigen::VectorXcd> jacobian_coefficients(const WaveProfile& profile, int max_mode) {
    check_shape(profile);
    const int n = profile.n();
    const int P = 2 * (max_mode + 2 * profile.m_f + 1);
    const Eigen::MatrixXd u = sample_profile(profile, P, 0);
    std::vector<double> vals(n * n * P), J(n * n);
    for (int j = 0; j < P; ++j) {
        const Eigen::VectorXd row = u.row(j).transpose();
        profile.model.jacobian_inplace(row.data(), J.data());
        for (int e = 0; e < n * n; ++e) vals[e * P + j] = J[e];
    }
    std::vector<cplx> scratch(P);
    std::vector<Eigen::VectorXcd> out(n * n, Eigen::VectorXcd(2 * max_mode + 1));
    for (int e = 0; e < n * n; ++e) analyze(&vals[e * P], P, max_mode, scratch, out[e]);
    return out;
}

}  // namespace subharm
