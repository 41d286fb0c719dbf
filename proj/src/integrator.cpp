#include "subharm/evolve.hpp"

#include "subharm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace subharm {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXcd columns_forward(const Eigen::MatrixXcd& values) {
    Eigen::MatrixXcd out(values.rows(), values.cols());
    for (int a = 0; a < values.cols(); ++a)
        fft_forward(std::span<const cplx>(values.col(a).data(), std::size_t(values.rows())),
                    std::span<cplx>(out.col(a).data(), std::size_t(values.rows())));
    return out;
}

Eigen::MatrixXcd columns_backward(const Eigen::MatrixXcd& values) {
    Eigen::MatrixXcd out(values.rows(), values.cols());
    for (int a = 0; a < values.cols(); ++a)
        fft_backward(std::span<const cplx>(values.col(a).data(), std::size_t(values.rows())),
                     std::span<cplx>(out.col(a).data(), std::size_t(values.rows())));
    return out;
}

// ETDRK4 coefficients for one linear rate.
struct EtdCoefficients {
    cplx E, E2, Q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(cplx lambda, double h) {
    const auto half = phi_functions(0.5 * lambda * h);
    const auto full = phi_functions(lambda * h);
    return {full[0], half[0], 0.5 * h * half[1], h * (full[1] - 3.0 * full[2] + 4.0 * full[3]),
            h * (full[2] - 2.0 * full[3]), h * (4.0 * full[3] - full[2])};
}

double jacobian_inf_norm(const ReactionModel& model, const Eigen::MatrixXd& u, const Eigen::MatrixXd* base) {
    const int n = model.n();
    std::vector<double> J(n * n), J0(n * n);
    double worst = 0.0;
    for (int i = 0; i < u.rows(); ++i) {
        const Eigen::VectorXd ui = u.row(i).transpose();
        model.jacobian_inplace(ui.data(), J.data());
        if (base) {
            const Eigen::VectorXd bi = base->row(i).transpose();
            model.jacobian_inplace(bi.data(), J0.data());
            for (int r = 0; r < n * n; ++r) J[r] -= J0[r];
        }
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += std::abs(J[r * n + c]);
            worst = std::max(worst, s);
        }
    }
    return worst;
}

}  // namespace

std::array<cplx, 4> phi_functions(cplx z) {
    std::array<cplx, 4> out{};
    if (std::abs(z) < 1.0) {
        // phi_k = sum_j z^j / (j + k)!
        for (int k = 0; k < 4; ++k) {
            double fact = std::tgamma(k + 1.0);
            cplx term = 1.0 / fact, sum = term;
            for (int j = 1; j < 30; ++j) {
                term *= z / double(j + k);
                sum += term;
            }
            out[k] = sum;
        }
        return out;
    }
    out[0] = std::exp(z);
    out[1] = (out[0] - 1.0) / z;
    out[2] = (out[1] - 1.0) / z;
    out[3] = (out[2] - 0.5) / z;
    return out;
}

std::pair<cplx, cplx> linear_exp_weights(cplx lambda, double h) {
    const auto p = phi_functions(lambda * h);
    return {h * (p[1] - p[2]), h * p[2]};
}

std::vector<double> fd_weights(double x0, std::span<const double> xs, int order) {
    // Fornberg's recursion, keeping only the requested derivative row
    const int n = int(xs.size());
    if (n <= order) throw ArgumentError("too few stencil points for the derivative order");
    std::vector<std::vector<double>> c(order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[order];
}

std::vector<double> time_derivative(std::span<const double> t, std::span<const double> y) {
    const int n = int(t.size());
    if (int(y.size()) != n) throw ArgumentError("series lengths differ");
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const int width = std::min(5, n);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - width / 2, 0, n - width);
        const auto w = fd_weights(t[i], t.subspan(lo, width), 1);
        double s = 0.0;
        for (int j = 0; j < width; ++j) s += w[j] * y[lo + j];
        out[i] = s;
    }
    return out;
}

Scheme parse_scheme(const std::string& name) {
    if (name == "imex-cn") return Scheme::ImexCN;
    if (name == "etdrk4") return Scheme::ETDRK4;
    if (name == "etdrk4-bloch") return Scheme::ETDRK4Bloch;
    throw ArgumentError("unknown scheme '" + name + "' (imex-cn, etdrk4, etdrk4-bloch)");
}

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::ImexCN: return "imex-cn";
        case Scheme::ETDRK4: return "etdrk4";
        case Scheme::ETDRK4Bloch: return "etdrk4-bloch";
    }
    return "?";
}

double TimeCutoff::operator()(double t) const {
    if (t <= t0) return 0.0;
    if (t >= t1) return 1.0;
    const double s = (t - t0) / (t1 - t0);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double TimeCutoff::derivative(double t) const {
    if (t <= t0 || t >= t1) return 0.0;
    const double s = (t - t0) / (t1 - t0);
    return 30.0 * s * s * (1.0 - s) * (1.0 - s) / (t1 - t0);
}

ExtractionMode parse_extraction(const std::string& name) {
    if (name == "projection") return ExtractionMode::Projection;
    if (name == "duhamel") return ExtractionMode::Duhamel;
    if (name == "both") return ExtractionMode::Both;
    throw ArgumentError("unknown extraction mode '" + name + "' (projection, duhamel, both)");
}

std::string extraction_name(ExtractionMode mode) {
    switch (mode) {
        case ExtractionMode::Projection: return "projection";
        case ExtractionMode::Duhamel: return "duhamel";
        case ExtractionMode::Both: return "both";
    }
    return "?";
}

void SimulationConfig::validate(const WaveProfile& profile, const GridFunction* initial) const {
    if (N < 1) throw ArgumentError("N must be positive");
    if (m_x < 3 || m_x % 2 == 0) throw ArgumentError("m_x must be odd and >= 3");
    if ((m_x - 1) / 2 < profile.m_f) throw ArgumentError("m_x must be at least 2 m_f + 1");
    if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
    if (!(t_max >= dt)) throw ArgumentError("t_max must be at least dt");
    if (K < 0) throw ArgumentError("K must be nonnegative");
    if (!(snapshot_stride > 0.0) || !(snapshot_growth >= 1.0)) throw ArgumentError("invalid snapshot stride rule");
    if (!(chi.t1 > chi.t0) || chi.t0 < 0.0) throw ArgumentError("time cutoff needs 0 <= t0 < t1");
    if (initial) {
        const Eigen::MatrixXd u = initial->real();
        double rate;
        if (scheme == Scheme::ETDRK4Bloch) {
            const Eigen::MatrixXd phi = profile_on_grid(profile, N, m_x).real();
            rate = jacobian_inf_norm(profile.model, u, &phi) / profile.k;
        } else {
            rate = jacobian_inf_norm(profile.model, u, nullptr) / profile.k;
        }
        if (rate > 0.0 && dt > 0.5 / rate)
            throw ArgumentError("dt = " + std::to_string(dt) + " exceeds the explicit-part limit " +
                                std::to_string(0.5 / rate));
    }
}

struct Integrator::Impl {
    explicit Impl(const WaveProfile& p) : profile(p) {}

    WaveProfile profile;
    int N, m_x, P, n;
    double h;
    Scheme scheme;
    const SemigroupEngine* engine = nullptr;
    std::unique_ptr<SemigroupEngine> owned;

    // Fourier schemes
    std::vector<cplx> lin;
    std::vector<cplx> cn_a, cn_b;
    std::vector<EtdCoefficients> etd;
    Eigen::MatrixXcd u_hat;
    Eigen::MatrixXcd prev_n;
    bool have_prev = false;

    // Bloch scheme
    Eigen::MatrixXd phi;
    std::vector<std::vector<EtdCoefficients>> etd_bloch;
    std::vector<Eigen::VectorXcd> z;

    Eigen::MatrixXd grid_values() const {
        if (scheme == Scheme::ETDRK4Bloch) return phi + inverse_bloch(engine->from_eigen(z)).real();
        return (columns_backward(u_hat) / double(P)).real();
    }

    Eigen::MatrixXd perturbation_values() {
        if (scheme == Scheme::ETDRK4Bloch) return inverse_bloch(engine->from_eigen(z)).real();
        if (phi.size() == 0) phi = profile_on_grid(profile, N, m_x).real();
        return grid_values() - phi;
    }

    Eigen::MatrixXcd reaction_hat(const Eigen::MatrixXcd& hat) const {
        const Eigen::MatrixXd u = (columns_backward(hat) / double(P)).real();
        Eigen::MatrixXd f(P, n);
        std::vector<double> out(n);
        for (int i = 0; i < P; ++i) {
            const Eigen::VectorXd ui = u.row(i).transpose();
            profile.model.f_inplace(ui.data(), out.data());
            for (int a = 0; a < n; ++a) f(i, a) = out[a] / profile.k;
        }
        return columns_forward(f.cast<cplx>());
    }

    // (f(phi + w) - f(phi) - Df(phi) w) / k in eigen-coordinates
    std::vector<Eigen::VectorXcd> remainder(const std::vector<Eigen::VectorXcd>& zz) const {
        const Eigen::MatrixXd w = inverse_bloch(engine->from_eigen(zz)).real();
        Eigen::MatrixXd r(P, n);
        Eigen::VectorXd pi(n), wi(n), out(n);
        for (int i = 0; i < P; ++i) {
            pi = phi.row(i).transpose();
            wi = w.row(i).transpose();
            profile.model.remainder_inplace(pi.data(), wi.data(), out.data());
            r.row(i) = out.transpose() / profile.k;
        }
        return engine->to_eigen(bloch_transform(GridFunction(N, m_x, r.cast<cplx>())));
    }
};

Integrator::Integrator(const WaveProfile& profile, int N, int m_x, double dt, Scheme scheme,
                       const SemigroupEngine* engine)
    : impl_(std::make_unique<Impl>(profile)) {
    if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
    if (N < 1 || m_x < 1) throw ArgumentError("grid sizes must be positive");
    Impl& s = *impl_;
    s.N = N;
    s.m_x = m_x;
    s.P = N * m_x;
    s.n = profile.n();
    s.h = dt;
    s.scheme = scheme;

    if (scheme == Scheme::ETDRK4Bloch) {
        if (engine) {
            if (engine->N() != N || engine->m_x() != m_x) throw ArgumentError("engine grid does not match");
            s.engine = engine;
        } else {
            s.owned = std::make_unique<SemigroupEngine>(profile, N, m_x, CutoffSpec{0.0});
            s.engine = s.owned.get();
        }
        s.phi = profile_on_grid(profile, N, m_x).real();
        s.etd_bloch.resize(N);
        for (int i = 0; i < N; ++i) {
            const auto& values = s.engine->eigenvalues(i);
            for (int r = 0; r < values.size(); ++r) s.etd_bloch[i].push_back(etd_coefficients(values(r), dt));
        }
        return;
    }

    s.lin.resize(s.P);
    for (int j = 0; j < s.P; ++j) {
        const double w = grid_frequency(j, N, s.P);
        const bool nyquist = s.P % 2 == 0 && j == s.P / 2;
        s.lin[j] = cplx{-profile.k * w * w, nyquist ? 0.0 : profile.c * w};
    }
    if (scheme == Scheme::ImexCN) {
        for (cplx l : s.lin) {
            s.cn_a.push_back((1.0 + 0.5 * dt * l) / (1.0 - 0.5 * dt * l));
            s.cn_b.push_back(dt / (1.0 - 0.5 * dt * l));
        }
    } else {
        for (cplx l : s.lin) s.etd.push_back(etd_coefficients(l, dt));
    }
}

Integrator::~Integrator() = default;

void Integrator::set_state(const GridFunction& u, double t) {
    Impl& s = *impl_;
    if (u.N != s.N || u.m_x != s.m_x || u.n() != s.n) throw ArgumentError("state does not match the integrator grid");
    t_ = t;
    s.have_prev = false;
    const Eigen::MatrixXcd real_u = u.real().cast<cplx>();
    if (s.scheme == Scheme::ETDRK4Bloch) {
        s.z = s.engine->to_eigen(bloch_transform(GridFunction(s.N, s.m_x, real_u - s.phi.cast<cplx>())));
    } else {
        s.u_hat = columns_forward(real_u);
    }
}

void Integrator::set_perturbation(const GridFunction& w, double t) {
    Impl& s = *impl_;
    if (w.N != s.N || w.m_x != s.m_x || w.n() != s.n) throw ArgumentError("state does not match the integrator grid");
    if (s.phi.size() == 0) s.phi = profile_on_grid(s.profile, s.N, s.m_x).real();
    if (s.scheme != Scheme::ETDRK4Bloch) {
        set_state(GridFunction::from_real(s.N, s.m_x, s.phi + w.real()), t);
        return;
    }
    t_ = t;
    s.have_prev = false;
    s.z = s.engine->to_eigen(bloch_transform(GridFunction::from_real(s.N, s.m_x, w.real())));
}

GridFunction Integrator::state() const { return GridFunction::from_real(impl_->N, impl_->m_x, impl_->grid_values()); }

GridFunction Integrator::perturbation() const {
    return GridFunction::from_real(impl_->N, impl_->m_x, impl_->perturbation_values());
}

void Integrator::step() {
    Impl& s = *impl_;
    if (s.scheme == Scheme::ImexCN) {
        const Eigen::MatrixXcd nh = s.reaction_hat(s.u_hat);
        const Eigen::MatrixXcd explicit_part = s.have_prev ? Eigen::MatrixXcd(1.5 * nh - 0.5 * s.prev_n) : nh;
        for (int j = 0; j < s.P; ++j) s.u_hat.row(j) = s.cn_a[j] * s.u_hat.row(j) + s.cn_b[j] * explicit_part.row(j);
        s.prev_n = nh;
        s.have_prev = true;
    } else if (s.scheme == Scheme::ETDRK4) {
        const Eigen::MatrixXcd& u = s.u_hat;
        const Eigen::MatrixXcd nu = s.reaction_hat(u);
        Eigen::MatrixXcd a(s.P, s.n), b(s.P, s.n), c(s.P, s.n);
        for (int j = 0; j < s.P; ++j) a.row(j) = s.etd[j].E2 * u.row(j) + s.etd[j].Q * nu.row(j);
        const Eigen::MatrixXcd na = s.reaction_hat(a);
        for (int j = 0; j < s.P; ++j) b.row(j) = s.etd[j].E2 * u.row(j) + s.etd[j].Q * na.row(j);
        const Eigen::MatrixXcd nb = s.reaction_hat(b);
        for (int j = 0; j < s.P; ++j) c.row(j) = s.etd[j].E2 * a.row(j) + s.etd[j].Q * (2.0 * nb.row(j) - nu.row(j));
        const Eigen::MatrixXcd nc = s.reaction_hat(c);
        for (int j = 0; j < s.P; ++j) {
            const auto& e = s.etd[j];
            s.u_hat.row(j) = e.E * u.row(j) + e.f1 * nu.row(j) + 2.0 * e.f2 * (na.row(j) + nb.row(j)) + e.f3 * nc.row(j);
        }
    } else {
        const auto& z = s.z;
        const auto nu = s.remainder(z);
        auto a = z, b = z, c = z;
        for (int i = 0; i < s.N; ++i)
            for (int r = 0; r < z[i].size(); ++r) a[i](r) = s.etd_bloch[i][r].E2 * z[i](r) + s.etd_bloch[i][r].Q * nu[i](r);
        const auto na = s.remainder(a);
        for (int i = 0; i < s.N; ++i)
            for (int r = 0; r < z[i].size(); ++r) b[i](r) = s.etd_bloch[i][r].E2 * z[i](r) + s.etd_bloch[i][r].Q * na[i](r);
        const auto nb = s.remainder(b);
        for (int i = 0; i < s.N; ++i)
            for (int r = 0; r < z[i].size(); ++r)
                c[i](r) = s.etd_bloch[i][r].E2 * a[i](r) + s.etd_bloch[i][r].Q * (2.0 * nb[i](r) - nu[i](r));
        const auto nc = s.remainder(c);
        for (int i = 0; i < s.N; ++i)
            for (int r = 0; r < z[i].size(); ++r) {
                const auto& e = s.etd_bloch[i][r];
                s.z[i](r) = e.E * z[i](r) + e.f1 * nu[i](r) + 2.0 * e.f2 * (na[i](r) + nb[i](r)) + e.f3 * nc[i](r);
            }
    }
    const bool finite = s.scheme == Scheme::ETDRK4Bloch
                            ? std::all_of(s.z.begin(), s.z.end(), [](const Eigen::VectorXcd& v) { return v.allFinite(); })
                            : s.u_hat.allFinite();
    if (!finite) throw BlowUpError("state is no longer finite", t_);
    t_ += s.h;
}

void Integrator::advance_to(double t_end) {
    const long steps = std::lround((t_end - t_) / impl_->h);
    for (long i = 0; i < steps; ++i) step();
}

GridFunction step(const WaveProfile& profile, const GridFunction& state, double dt, Scheme scheme) {
    Integrator integrator(profile, state.N, state.m_x, dt, scheme);
    integrator.set_state(state);
    integrator.step();
    return integrator.state();
}

std::vector<double> snapshot_times(const SimulationConfig& config) {
    const long total = std::lround(config.t_max / config.dt);
    std::vector<long> idx{0};
    double t = 0.0, stride = config.snapshot_stride;
    while (true) {
        t += stride;
        if (t > config.snapshot_uniform_until + 1e-12) stride *= config.snapshot_growth;
        const long i = std::lround(t / config.dt);
        if (i >= total) break;
        if (i > idx.back()) idx.push_back(i);
    }
    if (total > idx.back()) idx.push_back(total);
    std::vector<double> out;
    for (long i : idx) out.push_back(double(i) * config.dt);
    return out;
}

Trajectory integrate(const WaveProfile& profile, const GridFunction& u0, const SimulationConfig& config,
                     const SemigroupEngine* engine) {
    if (u0.N != config.N || u0.m_x != config.m_x) throw ArgumentError("initial state does not match the configured grid");
    const GridFunction phi = profile_on_grid(profile, config.N, config.m_x);
    return integrate_perturbation(profile, GridFunction::from_real(u0.N, u0.m_x, u0.real() - phi.real()), config, engine);
}

Trajectory integrate_perturbation(const WaveProfile& profile, const GridFunction& w0, const SimulationConfig& config,
                                  const SemigroupEngine* engine) {
    Integrator integrator(profile, config.N, config.m_x, config.dt, config.scheme, engine);
    integrator.set_perturbation(w0);
    Trajectory traj;
    long done = 0;
    for (double ts : snapshot_times(config)) {
        const long target = std::lround(ts / config.dt);
        for (; done < target; ++done) integrator.step();
        traj.t.push_back(ts);
        traj.u.push_back(integrator.state());
        traj.w.push_back(integrator.perturbation());
    }
    return traj;
}

}  // namespace subharm
