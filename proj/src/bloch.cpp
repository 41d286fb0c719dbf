#include "subharm/bloch.hpp"

#include "subharm/errors.hpp"
#include "subharm/linalg.hpp"
#include "subharm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace subharm {

namespace {

constexpr double pi = std::numbers::pi;

double overlap(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return std::abs(u.dot(v)) / (nu * nv);
}

std::vector<int> canonical_order(const Eigen::VectorXcd& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (values(i).real() != values(j).real()) return values(i).real() > values(j).real();
        return values(i).imag() > values(j).imag();
    });
    return order;
}

int argmin_modulus(const Eigen::VectorXcd& values) {
    int best = 0;
    for (int i = 1; i < values.size(); ++i)
        if (std::abs(values(i)) < std::abs(values(best))) best = i;
    return best;
}

struct OverlapPick {
    int best = -1;
    double best_overlap = 0.0;
    double second_overlap = 0.0;
};

OverlapPick pick_by_overlap(const Eigen::MatrixXcd& vectors, const Eigen::VectorXcd& reference) {
    OverlapPick p;
    for (int j = 0; j < vectors.cols(); ++j) {
        const double o = overlap(reference, vectors.col(j));
        if (o > p.best_overlap) {
            p.second_overlap = p.best_overlap;
            p.best_overlap = o;
            p.best = j;
        } else if (o > p.second_overlap) {
            p.second_overlap = o;
        }
    }
    return p;
}

// Puts eigenpair j of the system into the gauge <phi', Phi> = |phi'|^2, <Phi~, Phi> = 1.
CriticalMode gauge_mode(const BlochEigenSystem& sys, int j, const Eigen::VectorXcd& dphi) {
    const Eigen::VectorXcd v = sys.vectors.col(j);
    const cplx proj = dphi.dot(v);
    if (std::abs(proj) < 1e-14 * dphi.norm())
        throw TrackingError("critical eigenvector is orthogonal to phi'; reduce the branch radius");
    const cplx s = dphi.squaredNorm() / proj;
    CriticalMode mode;
    mode.xi = sys.xi;
    mode.lambda = sys.values(j);
    mode.index = j;
    mode.phi = s * v;
    const cplx dual_scale = sys.inverse.row(j) * v;  // 1 up to rounding
    mode.phi_tilde = sys.inverse.row(j).adjoint() / std::conj(s * dual_scale);
    return mode;
}

void check_truncation(const WaveProfile& profile, int m) {
    if (m < profile.m_f) throw ArgumentError("Bloch truncation m must be at least profile.m_f");
    if (!(profile.k > 0.0)) throw ArgumentError("profile wavenumber must be positive");
}

// Tracks the critical branch through the given xi values (starting at xi = 0, moving outward).
std::vector<CriticalMode> track(const BlochAssembler& assembler, const std::vector<double>& path,
                                const Eigen::VectorXcd& dphi, const BlochOptions& options) {
    std::vector<CriticalMode> out;
    Eigen::VectorXcd reference;
    for (double xi : path) {
        const auto sys = bloch_eigensystem(assembler.assemble(xi), options.condition_limit);
        int j;
        if (out.empty()) {
            j = argmin_modulus(sys.values);
            if (std::abs(sys.values(j)) > options.zero_tol)
                throw TrackingError("no zero eigenvalue at xi = 0: |lambda|min = " + std::to_string(std::abs(sys.values(j))));
            reference = dphi;
        }
        const auto pick = pick_by_overlap(sys.vectors, reference);
        {
            if (pick.second_overlap >= options.ambiguity) {
                std::ostringstream msg;
                msg << "critical branch tracking ambiguous at xi = " << xi << " (overlaps " << pick.best_overlap << ", "
                    << pick.second_overlap << "); use a smaller xi_max";
                throw TrackingError(msg.str());
            }
            j = pick.best;
        }
        out.push_back(gauge_mode(sys, j, dphi));
        reference = sys.vectors.col(j);
    }
    return out;
}

}  // namespace

FrequencyGrid omega_grid(int N) {
    if (N <= 0) throw ArgumentError("N must be positive");
    FrequencyGrid g;
    g.N = N;
    const int lo = (N % 2 == 0) ? -N / 2 : -(N - 1) / 2;
    for (int j = lo; j < lo + N; ++j) g.xi.push_back(lattice_frequency(j, N));
    g.zero_index = -lo;
    return g;
}

double lattice_frequency(int j, int N) { return 2.0 * pi * double(j) / double(N); }

BlochAssembler::BlochAssembler(const WaveProfile& profile, int m)
    : m_(m), n_(profile.n()), k_(profile.k), c_(profile.c) {
    check_truncation(profile, m);
    jac_ = jacobian_coefficients(profile, 2 * m);
    for (auto& v : jac_) v /= k_;
}

BlochMatrix BlochAssembler::assemble(double xi) const {
    if (!std::isfinite(xi)) throw ArgumentError("xi must be finite");
    const int w = 2 * m_ + 1;
    BlochMatrix out{xi, m_, n_, Eigen::MatrixXcd::Zero(dim(), dim())};
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            const Eigen::VectorXcd& coef = jac_[a * n_ + b];
            for (int l = -m_; l <= m_; ++l)
                for (int lp = -m_; lp <= m_; ++lp) out.entries(a * w + l + m_, b * w + lp + m_) = coef(l - lp + 2 * m_);
        }
    for (int a = 0; a < n_; ++a)
        for (int l = -m_; l <= m_; ++l) out.entries(a * w + l + m_, a * w + l + m_) += symbol(xi + 2.0 * pi * l);
    return out;
}

BlochMatrix assemble_bloch(const WaveProfile& profile, double xi, int m) { return BlochAssembler(profile, m).assemble(xi); }

std::vector<BlochEigenpair> bloch_spectrum(const BlochMatrix& matrix, bool want_vectors) {
    EigenDecomposition es;
    try {
        es = eig(matrix.entries, want_vectors);
    } catch (const NumericError& e) {
        std::ostringstream msg;
        msg << e.what() << " for Bloch matrix xi=" << matrix.xi << " m=" << matrix.m << " n=" << matrix.n;
        throw NumericError(msg.str());
    }
    std::vector<BlochEigenpair> out;
    out.reserve(es.values.size());
    for (int i : canonical_order(es.values)) {
        BlochEigenpair p{es.values(i), {}};
        if (want_vectors) p.vector = es.vectors.col(i).normalized();
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

BlochEigenSystem sorted_system(const BlochMatrix& matrix, bool with_inverse, double condition_limit) {
    EigenDecomposition es;
    try {
        es = eig(matrix.entries, true);
    } catch (const NumericError& e) {
        std::ostringstream msg;
        msg << e.what() << " for Bloch matrix xi=" << matrix.xi << " m=" << matrix.m << " n=" << matrix.n;
        throw NumericError(msg.str());
    }
    const auto order = canonical_order(es.values);
    const int dim = int(order.size());
    BlochEigenSystem sys;
    sys.xi = matrix.xi;
    sys.values.resize(dim);
    sys.vectors.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        sys.values(i) = es.values(order[i]);
        sys.vectors.col(i) = es.vectors.col(order[i]).normalized();
    }
    if (!with_inverse) return sys;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.vectors);
    sys.inverse = lu.inverse();
    const double norm1 = sys.vectors.cwiseAbs().colwise().sum().maxCoeff();
    const double inv1 = sys.inverse.cwiseAbs().colwise().sum().maxCoeff();
    sys.condition = std::isfinite(inv1) ? norm1 * inv1 : std::numeric_limits<double>::infinity();
    sys.defective = !(sys.condition <= condition_limit);
    sys.matrix = matrix.entries;
    return sys;
}

}  // namespace

BlochEigenSystem bloch_eigensystem(const BlochMatrix& matrix, double condition_limit) {
    return sorted_system(matrix, true, condition_limit);
}

std::size_t CriticalCurve::nearest(double x) const {
    if (xi.empty()) throw RangeError("empty critical curve");
    const auto it = std::lower_bound(xi.begin(), xi.end(), x);
    if (it == xi.begin()) return 0;
    if (it == xi.end()) return xi.size() - 1;
    const std::size_t hi = std::size_t(it - xi.begin());
    return (x - xi[hi - 1] <= xi[hi] - x) ? hi - 1 : hi;
}

CriticalCurve critical_curve(const WaveProfile& profile, double xi_max, int samples, const BlochOptions& options) {
    if (!(xi_max > 0.0) || xi_max > pi) throw ArgumentError("xi_max must lie in (0, pi]");
    if (samples < 1) throw ArgumentError("samples must be positive");
    const BlochAssembler assembler(profile, options.m);
    const Eigen::VectorXcd dphi = profile.stacked_padded(options.m, 1);
    std::vector<double> right, left;
    for (int s = 0; s <= samples; ++s) {
        right.push_back(xi_max * s / samples);
        left.push_back(-xi_max * s / samples);
    }
    const auto pos = track(assembler, right, dphi, options);
    const auto neg = track(assembler, left, dphi, options);

    CriticalCurve curve;
    curve.m = options.m;
    curve.xi_max = xi_max;
    for (int s = samples; s >= 1; --s) {
        curve.xi.push_back(neg[s].xi);
        curve.lambda.push_back(neg[s].lambda);
        curve.phi.push_back(neg[s].phi);
        curve.phi_tilde.push_back(neg[s].phi_tilde);
    }
    for (const auto& mode : pos) {
        curve.xi.push_back(mode.xi);
        curve.lambda.push_back(mode.lambda);
        curve.phi.push_back(mode.phi);
        curve.phi_tilde.push_back(mode.phi_tilde);
    }
    double sxa = 0, sxx = 0, sre = 0, sx4 = 0;
    for (std::size_t i = 0; i < curve.xi.size(); ++i) {
        const double x = curve.xi[i];
        sxa += x * curve.lambda[i].imag();
        sxx += x * x;
        sre += x * x * curve.lambda[i].real();
        sx4 += x * x * x * x;
    }
    curve.a = sxa / sxx;
    curve.d = -sre / sx4;
    return curve;
}

CriticalMode identify_critical(const CriticalCurve& curve, const BlochEigenSystem& system,
                               const Eigen::VectorXcd& profile_derivative, double ambiguity) {
    if (std::abs(system.xi) > curve.xi_max * (1.0 + 1e-12) + 1e-15)
        throw RangeError("xi = " + std::to_string(system.xi) + " lies outside the resolved critical branch");
    const std::size_t s = curve.nearest(system.xi);
    const auto pick = pick_by_overlap(system.vectors, curve.phi[s]);
    if (pick.second_overlap >= ambiguity)
        throw TrackingError("critical eigenvector ambiguous at xi = " + std::to_string(system.xi));
    return gauge_mode(system, pick.best, profile_derivative);
}

CriticalMode critical_mode_data(const WaveProfile& profile, double xi, double xi_1, const BlochOptions& options) {
    if (std::abs(xi) > xi_1) throw RangeError("xi outside the resolved critical branch radius");
    const BlochAssembler assembler(profile, options.m);
    const int steps = std::max(1, int(std::ceil(std::abs(xi) / 0.02)));
    std::vector<double> path;
    for (int s = 0; s <= steps; ++s) path.push_back(xi * s / steps);
    if (xi == 0.0) path.resize(1);
    return track(assembler, path, profile.stacked_padded(options.m, 1), options).back();
}

double vector_angle(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return std::numbers::pi / 2;
    const Eigen::VectorXcd a = u / nu, b = v / nv;
    const cplx proj = a.dot(b);
    return std::atan2((b - proj * a).norm(), std::abs(proj));
}

StabilityReport verify_diffusive_stability(const WaveProfile& profile, const BlochOptions& options) {
    if (options.scan < 4 || options.scan % 2) throw ArgumentError("scan must be an even count >= 4");
    const BlochAssembler assembler(profile, options.m);
    const Eigen::VectorXcd dphi = profile.stacked_padded(options.m, 1);
    const FrequencyGrid grid = omega_grid(options.scan);
    const std::size_t count = grid.xi.size();

    std::vector<BlochEigenSystem> systems(count);
    parallel_for(count, [&](std::size_t i) {
        systems[i] = sorted_system(assembler.assemble(grid.xi[i]), false, options.condition_limit);
    });

    StabilityReport rep;
    rep.options = options;
    const int z = grid.zero_index;
    const auto& sys0 = systems[z];
    const int zero = argmin_modulus(sys0.values);
    rep.zero_modulus = std::abs(sys0.values(zero));
    double second = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sys0.values.size(); ++i)
        if (i != zero) second = std::min(second, std::abs(sys0.values(i)));
    rep.zero_simplicity = second;
    rep.zero_angle = vector_angle(sys0.vectors.col(zero), dphi);
    rep.simple_zero_ok = rep.zero_modulus <= options.zero_tol && second > options.zero_tol &&
                         rep.zero_angle <= options.angle_tol;

    rep.scan_xi = grid.xi;
    rep.scan_max_re.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < systems[i].values.size(); ++r)
            if (!(int(i) == z && r == zero)) mx = std::max(mx, systems[i].values(r).real());
        rep.scan_max_re[i] = mx;
    }
    rep.gap_at_zero = -rep.scan_max_re[z];

    rep.spectral_ok = std::all_of(rep.scan_max_re.begin(), rep.scan_max_re.end(), [](double v) { return v < 0.0; });
    if (!rep.spectral_ok) {
        const auto it = std::max_element(rep.scan_max_re.begin(), rep.scan_max_re.end());
        std::ostringstream msg;
        msg << "(i) fails: max Re sigma = " << *it << " at xi = " << grid.xi[std::size_t(it - rep.scan_max_re.begin())];
        rep.details.push_back(msg.str());
    }

    rep.theta = std::numeric_limits<double>::infinity();
    double theta_xi = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (int(i) == z) continue;
        const double x = grid.xi[i];
        const double t = -rep.scan_max_re[i] / (x * x);
        if (t < rep.theta) {
            rep.theta = t;
            theta_xi = x;
        }
    }
    rep.quadratic_ok = rep.theta > 0.0;
    {
        std::ostringstream msg;
        msg << (rep.quadratic_ok ? "(ii) holds" : "(ii) fails") << ": theta = " << rep.theta << " attained at xi = " << theta_xi;
        rep.details.push_back(msg.str());
    }
    if (!rep.simple_zero_ok) {
        std::ostringstream msg;
        msg << "(iii) fails: |lambda0| = " << rep.zero_modulus << ", next |lambda| = " << second
            << ", angle to phi' = " << rep.zero_angle;
        rep.details.push_back(msg.str());
    }

    // critical branch isolation radius
    rep.scan_critical_re.assign(count, std::numeric_limits<double>::quiet_NaN());
    if (rep.simple_zero_ok && rep.gap_at_zero > 0.0) {
        const double threshold = options.separation_fraction * rep.gap_at_zero;
        double radius[2] = {0.0, 0.0};
        double min_crit = 0.0, max_other = -rep.gap_at_zero;
        rep.scan_critical_re[z] = 0.0;
        for (int side = 0; side < 2; ++side) {
            Eigen::VectorXcd reference = sys0.vectors.col(zero);
            const int dir = side == 0 ? 1 : -1;
            for (int i = z + dir; i >= 0 && i < int(count); i += dir) {
                const auto& sys = systems[i];
                const auto pick = pick_by_overlap(sys.vectors, reference);
                if (pick.second_overlap >= options.ambiguity) break;
                const double crit = sys.values(pick.best).real();
                double other = -std::numeric_limits<double>::infinity();
                for (int r = 0; r < sys.values.size(); ++r)
                    if (r != pick.best) other = std::max(other, sys.values(r).real());
                if (crit - other < threshold) break;
                reference = sys.vectors.col(pick.best);
                rep.scan_critical_re[i] = crit;
                radius[side] = std::abs(grid.xi[i]);
            }
        }
        rep.xi_1 = std::min(radius[0], radius[1]);
        for (std::size_t i = 0; i < count; ++i) {
            if (std::abs(grid.xi[i]) > rep.xi_1 || std::isnan(rep.scan_critical_re[i])) continue;
            min_crit = std::min(min_crit, rep.scan_critical_re[i]);
            const auto& sys = systems[i];
            // the largest real part besides the branch value
            double other = -std::numeric_limits<double>::infinity();
            bool skipped = false;
            for (int r = 0; r < sys.values.size(); ++r) {
                if (!skipped && sys.values(r).real() == rep.scan_critical_re[i] &&
                    (int(i) != z || r == zero)) {
                    skipped = true;
                    continue;
                }
                other = std::max(other, sys.values(r).real());
            }
            max_other = std::max(max_other, other);
        }
        rep.delta_1 = -0.5 * (min_crit + max_other);
        std::ostringstream msg;
        msg << "critical branch isolated on |xi| <= " << rep.xi_1 << " with delta_1 = " << rep.delta_1;
        rep.details.push_back(msg.str());
    }

    // delta_0(xi_0) = -max over |xi| >= xi_0 of max Re sigma(L_xi)
    std::vector<double> radii;
    for (double x : grid.xi)
        if (x > 0.0) radii.push_back(x);
    for (double r : radii) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < count; ++i)
            if (std::abs(grid.xi[i]) >= r - 1e-14) mx = std::max(mx, rep.scan_max_re[i]);
        rep.delta_0.emplace_back(r, -mx);
    }

    rep.verdict = rep.spectral_ok && rep.quadratic_ok && rep.simple_zero_ok;
    return rep;
}

SubharmonicGapReport subharmonic_spectrum(const WaveProfile& profile, int N, const BlochOptions& options) {
    const FrequencyGrid grid = omega_grid(N);
    const BlochAssembler assembler(profile, options.m);
    std::vector<std::vector<BlochEigenpair>> spectra(grid.xi.size());
    parallel_for(grid.xi.size(), [&](std::size_t i) { spectra[i] = bloch_spectrum(assembler.assemble(grid.xi[i])); });

    SubharmonicGapReport rep;
    rep.N = N;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.xi.size(); ++i) {
        int zero = -1;
        if (int(i) == grid.zero_index) {
            Eigen::VectorXcd vals(spectra[i].size());
            for (std::size_t r = 0; r < spectra[i].size(); ++r) vals(r) = spectra[i][r].value;
            zero = argmin_modulus(vals);
        }
        for (std::size_t r = 0; r < spectra[i].size(); ++r) {
            const bool crit = int(r) == zero;
            rep.spectrum.push_back({grid.xi[i], spectra[i][r].value, crit});
            if (!crit && spectra[i][r].value.real() > best) {
                best = spectra[i][r].value.real();
                rep.attaining_xi = grid.xi[i];
            }
        }
    }
    rep.delta_N = -best;
    return rep;
}

}  // namespace subharm
