#include "subharm/semigroup.hpp"

#include "subharm/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace subharm {

namespace {
constexpr double pi = std::numbers::pi;
}

double CutoffSpec::operator()(double xi) const {
    const double a = std::abs(xi);
    if (a >= xi_1) return 0.0;
    if (a <= 0.5 * xi_1) return 1.0;
    const double c = std::cos(pi * (a - 0.5 * xi_1) / xi_1);
    return c * c;
}

SemigroupEngine::SemigroupEngine(const WaveProfile& profile, int N, int m_x, const CutoffSpec& cutoff,
                                 const SemigroupOptions& options)
    : profile_(profile), N_(N), m_x_(m_x), L_((m_x - 1) / 2), n_(profile.n()), cutoff_(cutoff), options_(options) {
    if (m_x < 3 || m_x % 2 == 0) throw ArgumentError("m_x must be odd and >= 3");
    if (L_ < profile.m_f) throw ArgumentError("grid too coarse for the profile: need (m_x - 1) / 2 >= m_f");
    if (!(cutoff.xi_1 >= 0.0) || cutoff.xi_1 > pi + 1e-12) throw ArgumentError("cutoff radius must lie in [0, pi]");
    grid_ = omega_grid(N);
    dphi_ = profile.stacked_padded(L_, 1);
    const BlochAssembler assembler(profile, L_);

    systems_.resize(N);
    for (int i = 0; i < N; ++i) {
        systems_[i] = bloch_eigensystem(assembler.assemble(grid_.xi[i]), options.condition_limit);
        fallback_ = fallback_ || systems_[i].defective;
        rho_.push_back(cutoff(grid_.xi[i]));
    }

    BlochOptions bo;
    bo.m = L_;
    bo.ambiguity = options.ambiguity;
    bo.condition_limit = options.condition_limit;
    const double xi_max = std::max(std::min(cutoff.xi_1, pi), options.branch_step);
    const int samples = std::max(1, int(std::ceil(xi_max / options.branch_step)));
    const CriticalCurve curve = critical_curve(profile, xi_max, samples, bo);

    critical_.resize(N);
    for (int i = 0; i < N; ++i) {
        if (i == grid_.zero_index || rho_[i] > 0.0)
            critical_[i] = identify_critical(curve, systems_[i], dphi_, options.ambiguity);
    }
    // L phi' = 0 exactly; the solver returns O(eps ||L||), which would make the mean phase drift
    auto& zero = critical_[grid_.zero_index];
    if (zero.index >= 0 && !systems_[grid_.zero_index].defective) {
        systems_[grid_.zero_index].values(zero.index) = 0.0;
        zero.lambda = 0.0;
    }
}

Eigen::VectorXcd SemigroupEngine::evolve_component(std::size_t idx, const Eigen::VectorXcd& g, double t,
                                                   bool drop_critical) const {
    const auto& sys = systems_[idx];
    const bool drop = drop_critical && critical_[idx].index >= 0;
    if (sys.defective) {
        Eigen::VectorXcd h = g;
        if (drop) h -= critical_[idx].phi * critical_[idx].phi_tilde.dot(g);
        const Eigen::MatrixXcd E = (sys.matrix * cplx{t, 0.0}).exp();
        return E * h;
    }
    Eigen::VectorXcd a = sys.inverse * g;
    if (drop) a(critical_[idx].index) = 0.0;
    for (int r = 0; r < a.size(); ++r) a(r) *= std::exp(sys.values(r) * t);
    return sys.vectors * a;
}

BlochDecomposition SemigroupEngine::evolve(const BlochDecomposition& g, double t) const {
    if (!(t >= 0.0)) throw ArgumentError("t must be nonnegative");
    if (g.N != N_ || g.L != L_ || g.n != n_) throw ArgumentError("Bloch data does not match the engine");
    BlochDecomposition out = g;
    for (int i = 0; i < N_; ++i) out.components[i] = evolve_component(i, g.components[i], t, false);
    return out;
}

GridFunction SemigroupEngine::evolve(const GridFunction& v, double t) const {
    if (v.N != N_ || v.m_x != m_x_) throw ArgumentError("grid does not match the engine");
    return inverse_bloch(evolve(bloch_transform(v), t));
}

std::vector<Eigen::VectorXcd> SemigroupEngine::to_eigen(const BlochDecomposition& g) const {
    if (fallback_) throw NumericError("eigenbasis unavailable: some Bloch matrix is ill-conditioned");
    if (g.N != N_ || g.L != L_ || g.n != n_) throw ArgumentError("Bloch data does not match the engine");
    std::vector<Eigen::VectorXcd> z(N_);
    for (int i = 0; i < N_; ++i) z[i] = systems_[i].inverse * g.components[i];
    return z;
}

BlochDecomposition SemigroupEngine::from_eigen(const std::vector<Eigen::VectorXcd>& z) const {
    if (fallback_) throw NumericError("eigenbasis unavailable: some Bloch matrix is ill-conditioned");
    if (int(z.size()) != N_) throw ArgumentError("eigen-coordinates do not match the engine");
    BlochDecomposition out = BlochDecomposition::zeros(N_, L_, n_);
    for (int i = 0; i < N_; ++i) out.components[i] = systems_[i].vectors * z[i];
    return out;
}

cplx SemigroupEngine::projection(const BlochDecomposition& g, std::size_t idx) const {
    if (critical_[idx].index < 0) return {};
    return critical_[idx].phi_tilde.dot(g.components[idx]);
}

cplx SemigroupEngine::mean_phase(const BlochDecomposition& g) const {
    return projection(g, grid_.zero_index) / double(N_);
}

std::vector<cplx> SemigroupEngine::sp_coefficients(const BlochDecomposition& g, double t, int l, int m) const {
    if (l < 0 || m < 0 || l > options_.max_derivative || m > options_.max_derivative)
        throw ArgumentError("derivative orders must lie in [0, " + std::to_string(options_.max_derivative) + "]");
    std::vector<cplx> coef(N_, cplx{});
    for (int i = 0; i < N_; ++i) {
        if (i == grid_.zero_index || critical_[i].index < 0) continue;
        const cplx lam = critical_[i].lambda;
        const cplx mult = std::pow(cplx{0.0, grid_.xi[i]}, l) * std::pow(lam, m);
        coef[i] = rho_[i] * mult * std::exp(lam * t) * projection(g, i) / double(N_);
    }
    return coef;
}

GridFunction SemigroupEngine::lattice_field(const std::vector<cplx>& coef) const {
    BlochDecomposition d = BlochDecomposition::zeros(N_, L_, 1);
    for (int i = 0; i < N_; ++i) d.components[i](L_) = double(N_) * coef[i];
    return inverse_bloch(d);
}

BlochDecomposition SemigroupEngine::times_derivative(const std::vector<cplx>& coef) const {
    BlochDecomposition d = BlochDecomposition::zeros(N_, L_, n_);
    for (int i = 0; i < N_; ++i) d.components[i] = double(N_) * coef[i] * dphi_;
    return d;
}

SemigroupEngine::Parts SemigroupEngine::decompose(const BlochDecomposition& g, double t) const {
    Parts p;
    p.total = evolve(g, t);
    p.mean_term = p.phase_term = p.high = p.low_tilde = p.critical_tilde = BlochDecomposition::zeros(N_, L_, n_);
    p.sp.assign(N_, cplx{});
    p.mean_phase = mean_phase(g);
    for (int i = 0; i < N_; ++i) {
        const Eigen::VectorXcd& total = p.total.components[i];
        if (critical_[i].index < 0) {
            p.high.components[i] = total;
            continue;
        }
        const auto& mode = critical_[i];
        const cplx beta = mode.phi_tilde.dot(g.components[i]);
        const cplx growth = std::exp(mode.lambda * t);
        const Eigen::VectorXcd crit = growth * beta * mode.phi;
        if (i == grid_.zero_index) {
            p.mean_term.components[i] = beta * dphi_;
            p.low_tilde.components[i] = total - crit;  // rho(0) = 1
            p.critical_tilde.components[i] = crit - beta * dphi_;
            continue;
        }
        const double r = rho_[i];
        p.high.components[i] = (1.0 - r) * total;
        p.low_tilde.components[i] = r * (total - crit);
        p.critical_tilde.components[i] = r * growth * beta * (mode.phi - dphi_);
        p.phase_term.components[i] = r * growth * beta * dphi_;
        p.sp[i] = r * growth * beta / double(N_);
    }
    p.stilde = p.high + p.low_tilde + p.critical_tilde;
    return p;
}

GridFunction profile_on_grid(const WaveProfile& profile, int N, int m_x, int deriv) {
    const Eigen::MatrixXd cell = sample_profile(profile, m_x, deriv);
    Eigen::MatrixXd full(N * m_x, profile.n());
    for (int c = 0; c < N; ++c) full.block(c * m_x, 0, m_x, profile.n()) = cell;
    return GridFunction::from_real(N, m_x, full);
}

GridFunction apply_semigroup(const WaveProfile& profile, const GridFunction& v, double t, const SemigroupOptions& options) {
    const SemigroupEngine engine(profile, v.N, v.m_x, CutoffSpec{0.0}, options);
    return engine.evolve(v, t);
}

SemigroupDecomposition decompose_semigroup(const WaveProfile& profile, const GridFunction& v, double t,
                                           const CutoffSpec& cutoff, const SemigroupOptions& options) {
    const SemigroupEngine engine(profile, v.N, v.m_x, cutoff, options);
    const auto parts = engine.decompose(bloch_transform(v), t);
    return {parts.mean_phase, engine.lattice_field(parts.sp), inverse_bloch(parts.stilde)};
}

GridFunction sp_apply(const WaveProfile& profile, const GridFunction& v, double t, int l, int m, const CutoffSpec& cutoff,
                      const SemigroupOptions& options) {
    const SemigroupEngine engine(profile, v.N, v.m_x, cutoff, options);
    return engine.lattice_field(engine.sp_coefficients(bloch_transform(v), t, l, m));
}

}  // namespace subharm
