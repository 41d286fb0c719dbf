#include "subharm/evolve.hpp"

#include "subharm/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace subharm {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

GridFunction real_part(const GridFunction& g) { return GridFunction::from_real(g.N, g.m_x, g.real()); }

// psi fields at every snapshot -> psi_t by five-point stencils in time
std::vector<GridFunction> field_time_derivative(std::span<const double> t, const std::vector<GridFunction>& f) {
    const int n = int(t.size());
    std::vector<GridFunction> out(n);
    if (n == 0) return out;
    const int width = std::min(5, n);
    for (int i = 0; i < n; ++i) {
        out[i] = GridFunction(f[i].N, f[i].m_x, f[i].n());
        if (n < 2) continue;
        const int lo = std::clamp(i - width / 2, 0, n - width);
        const auto w = fd_weights(t[i], t.subspan(lo, width), 1);
        for (int j = 0; j < width; ++j) out[i].values += w[j] * f[lo + j].values;
    }
    return out;
}

double sup_finite(std::span<const double> y) {
    double m = 0.0;
    for (double v : y)
        if (std::isfinite(v)) m = std::max(m, std::abs(v));
    return m;
}

// phi(x - s(x)) - phi(x) summed mode by mode, without cancellation for small s
GridFunction shifted_difference(const WaveProfile& profile, int N, int m_x, const GridFunction& shift) {
    constexpr double pi = std::numbers::pi;
    const int n = profile.n(), P = N * m_x;
    GridFunction out(N, m_x, n);
    for (int j = 0; j < P; ++j) {
        const double x = out.x(j), s = shift.values(j, 0).real();
        for (int l = -profile.m_f; l <= profile.m_f; ++l) {
            if (l == 0) continue;
            const cplx factor = std::polar(1.0, 2.0 * pi * l * x) * cplx{0.0, -2.0 * std::sin(pi * l * s)} *
                                std::polar(1.0, -pi * l * s);
            for (int a = 0; a < n; ++a) out.values(j, a) += profile.coeff(a, l) * factor;
        }
    }
    out.values = out.values.real().cast<cplx>();
    return out;
}

// u(x - shift) - phi(x) for u = phi + w
GridFunction warped_gap(const WaveOnGrid& wave, const GridFunction& w, const GridFunction& shift) {
    return shifted_difference(wave.profile, w.N, w.m_x, shift) + warp(w, shift);
}

const GridFunction& perturbation_at(const Trajectory& trajectory, std::size_t j, const WaveOnGrid& wave,
                                    GridFunction& scratch) {
    if (j < trajectory.w.size()) return trajectory.w[j];
    scratch = real_part(trajectory.u[j]) - wave.phi;
    return scratch;
}

}  // namespace

WaveOnGrid::WaveOnGrid(const WaveProfile& p, int N, int m_x)
    : profile(p), phi(profile_on_grid(p, N, m_x, 0)), dphi(profile_on_grid(p, N, m_x, 1)) {}

GridFunction warp(const GridFunction& u, const GridFunction& shift) {
    if (shift.N != u.N || shift.m_x != u.m_x || shift.n() != 1) throw ArgumentError("shift must be a scalar field on the grid");
    std::vector<double> x(u.points());
    for (int j = 0; j < u.points(); ++j) x[j] = u.x(j) - shift.values(j, 0).real();
    return GridFunction(u.N, u.m_x, interpolate(u, x).real().cast<cplx>());
}

ModulationSnapshot extract_modulation_projection(const SemigroupEngine& engine, const WaveOnGrid& wave,
                                                 const GridFunction& u) {
    return extract_modulation_perturbation(engine, wave, real_part(u) - wave.phi);
}

ModulationSnapshot extract_modulation_perturbation(const SemigroupEngine& engine, const WaveOnGrid& wave,
                                                   const GridFunction& w) {
    if (w.N != engine.N() || w.m_x != engine.m_x()) throw ArgumentError("state does not match the engine grid");
    const BlochDecomposition g = bloch_transform(w);
    ModulationSnapshot snap;
    snap.gamma = engine.projection(g, engine.grid().zero_index).real();
    snap.psi = real_part(engine.lattice_field(engine.sp_coefficients(g, 0.0)));
    snap.psi_x = real_part(engine.lattice_field(engine.sp_coefficients(g, 0.0, 1, 0)));
    const double slope = snap.psi_x.values.real().cwiseAbs().maxCoeff();
    if (slope >= 0.5)
        throw ExtractionError("phase gradient " + std::to_string(slope) + " too large for an invertible warp");
    GridFunction shift = snap.psi;
    shift.values.array() += snap.gamma / engine.N();
    snap.v = warped_gap(wave, w, shift);
    return snap;
}

ModulationSnapshot extract_modulation_projection(const WaveProfile& profile, const GridFunction& u,
                                                 const CutoffSpec& cutoff) {
    const SemigroupEngine engine(profile, u.N, u.m_x, cutoff);
    return extract_modulation_projection(engine, WaveOnGrid(profile, u.N, u.m_x), u);
}

NonlinearResiduals nonlinear_residuals(const WaveProfile& profile, const WaveOnGrid& wave, const GridFunction& v,
                                       const GridFunction& psi_x, const GridFunction& psi_t, double gamma_t) {
    check_compatible(v, wave.phi);
    const int P = v.points(), n = v.n(), N = v.N;
    const double k = profile.k, c = profile.c;
    const Eigen::VectorXd px = psi_x.values.col(0).real();
    const Eigen::VectorXd pt = psi_t.values.col(0).real();
    if (px.maxCoeff() >= 1.0) throw SingularityError("psi_x reaches 1; the modulation is singular");

    const Eigen::MatrixXd vv = v.real(), phi = wave.phi.real(), dphi = wave.dphi.real();
    Eigen::MatrixXd q(P, n);
    Eigen::VectorXd pi(n), wi(n), rem(n);
    for (int i = 0; i < P; ++i) {
        pi = phi.row(i).transpose();
        wi = vv.row(i).transpose();
        profile.model.remainder_inplace(pi.data(), wi.data(), rem.data());
        q.row(i) = (1.0 - px(i)) * rem.transpose();
    }

    const Eigen::MatrixXd vx = derivative(v).real();
    Eigen::MatrixXd pxv(P, n), r(P, n);
    for (int a = 0; a < n; ++a) pxv.col(a) = px.cwiseProduct(vv.col(a));
    const Eigen::MatrixXd pxv_x = derivative(GridFunction::from_real(N, v.m_x, pxv)).real();
    for (int i = 0; i < P; ++i) {
        const double ratio = px(i) / (1.0 - px(i));
        for (int a = 0; a < n; ++a)
            r(i, a) = -pt(i) * vv(i, a) - gamma_t / N * vv(i, a) + c * pxv(i, a) + k * pxv_x(i, a) +
                      k * ratio * vx(i, a) + k * ratio * px(i) * dphi(i, a);
    }
    NonlinearResiduals out;
    out.Q = GridFunction::from_real(N, v.m_x, q);
    out.R = GridFunction::from_real(N, v.m_x, r);
    const Eigen::MatrixXd rx = derivative(out.R).real();
    out.Nres = GridFunction::from_real(N, v.m_x, (q + k * rx) / k);
    return out;
}

NonlinearResiduals nonlinear_residuals(const WaveProfile& profile, const GridFunction& v, const GridFunction& psi,
                                       const GridFunction& psi_x, const GridFunction& psi_t, double gamma_t, int N) {
    if (v.N != N || psi.N != N) throw ArgumentError("fields do not live on the N-cell grid");
    return nonlinear_residuals(profile, WaveOnGrid(profile, N, v.m_x), v, psi_x, psi_t, gamma_t);
}

ModulationTrace projection_trace(const SemigroupEngine& engine, const Trajectory& trajectory, int K) {
    const WaveOnGrid wave(engine.profile(), engine.N(), engine.m_x());
    ModulationTrace tr;
    tr.mode = "projection";
    tr.N = engine.N();
    tr.K = K;
    tr.t = trajectory.t;
    const std::size_t J = tr.t.size();
    const GridFunction zero_scalar(engine.N(), engine.m_x(), 1);
    GridFunction scratch;
    for (std::size_t j = 0; j < J; ++j) {
        try {
            auto snap = extract_modulation_perturbation(engine, wave, perturbation_at(trajectory, j, wave, scratch));
            tr.gamma.push_back(snap.gamma);
            tr.psi.push_back(std::move(snap.psi));
            tr.psi_x.push_back(std::move(snap.psi_x));
            tr.v.push_back(std::move(snap.v));
            tr.failures.emplace_back();
        } catch (const ExtractionError& e) {
            tr.gamma.push_back(nan);
            tr.psi.push_back(zero_scalar);
            tr.psi_x.push_back(zero_scalar);
            tr.v.push_back(GridFunction(engine.N(), engine.m_x(), engine.n()));
            tr.failures.emplace_back(e.what());
        }
    }
    tr.gamma_t = time_derivative(tr.t, tr.gamma);
    tr.psi_t = field_time_derivative(tr.t, tr.psi);
    compute_trace_norms(tr, wave, trajectory);
    return tr;
}

void compute_trace_norms(ModulationTrace& tr, const WaveOnGrid& wave, const Trajectory& trajectory) {
    const int K = tr.K;
    tr.norms.assign(tr.t.size(), {});
    GridFunction scratch;
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
        TraceNorms& nm = tr.norms[j];
        if (!tr.failures[j].empty() || !std::isfinite(tr.gamma[j])) {
            nm = {nan, nan, nan, nan, nan, nan, nan};
            continue;
        }
        nm.v_hk = norm_hs(tr.v[j], K);
        nm.v_l2 = norm_l2(tr.v[j]);
        nm.psi_x_hk1 = norm_hs(tr.psi_x[j], K + 1);
        nm.psi_t_hk = norm_hs(tr.psi_t[j], K);
        nm.gamma_t_abs = std::abs(tr.gamma_t[j]);
        GridFunction shift = tr.psi[j];
        shift.values.array() += tr.gamma[j] / tr.N;
        nm.composite_hk = norm_hs(warped_gap(wave, perturbation_at(trajectory, j, wave, scratch), shift), K);
        GridFunction pt = tr.psi_t[j];
        pt.values.array() += tr.gamma_t[j] / tr.N;
        nm.grad_hk = std::hypot(norm_hs(tr.psi_x[j], K), norm_hs(pt, K));
    }
    tr.zeta = zeta_diagnostic(tr);
}

std::vector<double> zeta_diagnostic(const ModulationTrace& trace) {
    std::vector<double> z(trace.t.size(), 0.0);
    double run = 0.0;
    for (std::size_t j = 0; j < trace.t.size(); ++j) {
        const auto& nm = trace.norms[j];
        const double inner = nm.v_hk * nm.v_hk + nm.psi_x_hk1 * nm.psi_x_hk1 + nm.psi_t_hk * nm.psi_t_hk + nm.gamma_t_abs;
        if (std::isfinite(inner)) run = std::max(run, std::sqrt(inner) * std::pow(1.0 + trace.t[j], 0.75));
        z[j] = run;
    }
    return z;
}

ModulationTrace extract_modulation_duhamel(const SemigroupEngine& engine, const Trajectory& trajectory,
                                           const TimeCutoff& chi, int K, const DuhamelOptions& options) {
    const WaveProfile& profile = engine.profile();
    const int N = engine.N(), m_x = engine.m_x();
    const std::size_t zero = engine.grid().zero_index;
    const WaveOnGrid wave(profile, N, m_x);
    const std::size_t J = trajectory.t.size();
    if (J == 0 || trajectory.t.front() != 0.0) throw ArgumentError("trajectory must start at t = 0");

    ModulationTrace tr = projection_trace(engine, trajectory, K);
    tr.mode = "duhamel";
    for (std::size_t j = 0; j < J; ++j)
        if (!tr.failures[j].empty()) {
            tr.gamma[j] = 0.0;
            tr.gamma_t[j] = 0.0;
        }

    GridFunction scratch;
    const BlochDecomposition g0 = bloch_transform(perturbation_at(trajectory, 0, wave, scratch));
    const auto z0 = engine.to_eigen(g0);
    const double b0 = engine.projection(g0, zero).real();
    const auto c0 = engine.sp_coefficients(g0, 0.0);

    std::vector<cplx> lam_c(N, cplx{});
    std::vector<cplx> ixi(N, cplx{});
    for (int i = 0; i < N; ++i) {
        if (engine.has_critical(i)) lam_c[i] = engine.lambda_c(i);
        ixi[i] = cplx{0.0, engine.grid().xi[i]};
    }
    auto field = [&](const std::vector<cplx>& coef) { return real_part(engine.lattice_field(coef)); };

    struct Update {
        std::vector<double> gamma, gamma_t;
        std::vector<GridFunction> psi, psi_x, psi_t, v;
    };

    // one application of the right-hand sides to the current trace
    auto apply = [&](const ModulationTrace& cur) {
        std::vector<std::vector<Eigen::VectorXcd>> zn(J);
        std::vector<double> n0(J);
        std::vector<std::vector<cplx>> cn(J);
        for (std::size_t j = 0; j < J; ++j) {
            const auto res = nonlinear_residuals(profile, wave, cur.v[j], cur.psi_x[j], cur.psi_t[j], cur.gamma_t[j]);
            const BlochDecomposition gn = bloch_transform(res.Nres);
            zn[j] = engine.to_eigen(gn);
            n0[j] = engine.projection(gn, zero).real();
            cn[j] = engine.sp_coefficients(gn, 0.0);
        }
        Update up;
        auto a = z0;
        double bsum = b0;
        auto coef = c0;
        for (std::size_t j = 0; j < J; ++j) {
            if (j > 0) {
                const double h = trajectory.t[j] - trajectory.t[j - 1];
                for (int i = 0; i < N; ++i) {
                    const auto& lam = engine.eigenvalues(i);
                    for (int r = 0; r < lam.size(); ++r) {
                        const auto [wa, wb] = linear_exp_weights(lam(r), h);
                        a[i](r) = std::exp(lam(r) * h) * a[i](r) + wa * zn[j - 1][i](r) + wb * zn[j][i](r);
                    }
                    const auto [wa, wb] = linear_exp_weights(lam_c[i], h);
                    coef[i] = std::exp(lam_c[i] * h) * coef[i] + wa * cn[j - 1][i] + wb * cn[j][i];
                }
                bsum += 0.5 * h * (n0[j - 1] + n0[j]);
            }
            const double tj = trajectory.t[j], x = chi(tj), xd = chi.derivative(tj);
            std::vector<cplx> cx(N), ct(N);
            for (int i = 0; i < N; ++i) {
                cx[i] = ixi[i] * coef[i];
                ct[i] = lam_c[i] * coef[i] + cn[j][i];
            }
            const GridFunction Psi = field(coef), Psi_x = field(cx), Psi_t = field(ct);
            up.gamma.push_back(x * bsum);
            up.gamma_t.push_back(xd * bsum + x * n0[j]);
            up.psi.push_back(x * Psi);
            up.psi_x.push_back(x * Psi_x);
            up.psi_t.push_back(cplx{xd} * Psi + cplx{x} * Psi_t);
            // (1 - chi psi_x) v = A - phi' (gamma / N + psi)
            const GridFunction A = real_part(inverse_bloch(engine.from_eigen(a)));
            GridFunction shift = up.psi.back();
            shift.values.array() += up.gamma.back() / N;
            GridFunction v = A - scale_by(shift, wave.dphi);
            const Eigen::ArrayXd denom = 1.0 - x * up.psi_x.back().values.col(0).real().array();
            for (int c = 0; c < v.n(); ++c) v.values.col(c).array() /= denom.cast<cplx>();
            up.v.push_back(std::move(v));
        }
        return up;
    };

    auto change = [&](const ModulationTrace& cur, const Update& up) {
        double worst = 0.0;
        for (std::size_t j = 0; j < J; ++j)
            worst = std::max(worst, norm_l2(up.psi[j] - cur.psi[j]) + std::abs(up.gamma[j] - cur.gamma[j]));
        return worst;
    };

    double prev = std::numeric_limits<double>::infinity();
    int rises = 0;
    for (int it = 1; it <= options.max_iter; ++it) {
        Update up = apply(tr);
        const double d = change(tr, up);
        tr.gamma = std::move(up.gamma);
        tr.gamma_t = std::move(up.gamma_t);
        tr.psi = std::move(up.psi);
        tr.psi_x = std::move(up.psi_x);
        tr.psi_t = std::move(up.psi_t);
        tr.v = std::move(up.v);
        tr.iterations = it;
        tr.update_norm = d;
        if (d < options.tol) break;
        rises = d > prev ? rises + 1 : 0;
        if (rises >= 2)
            throw DivergenceError("modulation fixed point is not contracting (update " + std::to_string(d) +
                                  "); reduce E_0");
        prev = d;
    }
    for (auto& f : tr.failures) f.clear();

    // defect of the v equation at the returned trace
    const Update check = apply(tr);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        num = std::max(num, norm_l2(check.v[j] - tr.v[j]));
        den = std::max(den, norm_l2(tr.v[j]));
    }
    tr.v2_defect = den > 0.0 ? num / den : num;
    compute_trace_norms(tr, wave, trajectory);
    return tr;
}

DampingCheck damping_check(const ModulationTrace& trace, std::span<const double> theta_grid) {
    DampingCheck out;
    const std::size_t J = trace.t.size();
    std::vector<double> lhs(J), forcing(J);
    for (std::size_t j = 0; j < J; ++j) {
        const auto& nm = trace.norms[j];
        lhs[j] = nm.v_hk * nm.v_hk;
        forcing[j] = nm.v_l2 * nm.v_l2 + nm.psi_x_hk1 * nm.psi_x_hk1 + nm.psi_t_hk * nm.psi_t_hk +
                     nm.gamma_t_abs * nm.gamma_t_abs;
    }
    double best_score = std::numeric_limits<double>::infinity();
    for (double theta : theta_grid) {
        double integral = 0.0, c = 0.0;
        bool feasible = true;
        for (std::size_t j = 0; j < J; ++j) {
            if (j > 0) {
                const double h = trace.t[j] - trace.t[j - 1], e = std::exp(-theta * h);
                integral = e * integral + 0.5 * h * (e * forcing[j - 1] + forcing[j]);
            }
            const double rhs = std::exp(-theta * trace.t[j]) * lhs[0] + integral;
            if (!std::isfinite(lhs[j]) || !std::isfinite(rhs)) continue;
            if (lhs[j] > 0.0) {
                if (rhs > 0.0) c = std::max(c, lhs[j] / rhs);
                else feasible = false;
            }
        }
        const double cc = feasible ? c : std::numeric_limits<double>::infinity();
        out.theta.push_back(theta);
        out.constant.push_back(cc);
        if (cc * (1.0 + theta) < best_score) {
            best_score = cc * (1.0 + theta);
            out.best_theta = theta;
            out.best_constant = cc;
        }
    }
    if (!std::isfinite(best_score)) {
        out.best_constant = std::numeric_limits<double>::infinity();
        out.violations = int(std::count_if(lhs.begin(), lhs.end(), [](double v) { return v > 0.0; }));
        out.max_violation = std::numeric_limits<double>::infinity();
    }
    return out;
}

PhaseConvergence phase_convergence(const ModulationTrace& trace, const WaveProfile& profile,
                                   const GridFunction& w_final, double t_lo, double t_hi) {
    if (trace.t.empty() || trace.t.back() < t_lo) throw RangeError("trace does not reach the fit window");
    if (t_hi <= 0.0) t_hi = trace.t.back();
    PhaseConvergence out;
    const std::size_t last = trace.t.size() - 1;
    // tail of a (1+t)^{-3/2} rate beyond the horizon
    out.gamma_inf = trace.gamma[last] + 2.0 * trace.gamma_t[last] * (1.0 + trace.t[last]);
    std::vector<double> gt(trace.t.size()), gap(trace.t.size());
    for (std::size_t j = 0; j < trace.t.size(); ++j) {
        gt[j] = std::abs(trace.gamma_t[j]);
        gap[j] = std::abs(trace.gamma[j] - out.gamma_inf);
    }
    try {
        out.gamma_t_fit = measure_decay(trace.t, gt, -1.5, t_lo, t_hi, {.envelope = true});
        out.gamma_gap_fit = measure_decay(trace.t, gap, -0.5, t_lo, t_hi, {.envelope = true});
    } catch (const ArgumentError& e) {
        throw RangeError(std::string("horizon too short for phase fits: ") + e.what());
    }

    const int N = trace.N;
    GridFunction back(N, w_final.m_x, 1);
    auto misfit = [&](double s) {
        back.values.setConstant(-s);
        return (w_final - shifted_difference(profile, N, w_final.m_x, back)).values.squaredNorm();
    };
    const double guess = out.gamma_inf / N;
    const auto best = boost::math::tools::brent_find_minima(misfit, guess - 0.05, guess + 0.05, 40);
    out.sigma_inf = best.first;
    out.sigma_gap = std::abs(std::remainder(out.sigma_inf - guess, 1.0));
    return out;
}

CrossoverFit crossover_fit(std::span<const double> t, std::span<const double> y, double power_lo, double power_hi) {
    CrossoverFit out;
    out.power_fit = measure_decay(t, y, -0.25, power_lo, power_hi);
    const double C = out.power_fit.constant, p = out.power_fit.exponent;
    std::size_t knee = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > power_lo && std::isfinite(y[i]) && y[i] < 0.5 * C * std::pow(1.0 + t[i], p)) {
            knee = i;
            break;
        }
    if (knee == t.size()) throw RangeError("no crossover detected within the horizon");
    out.t_cross = t[knee];
    std::vector<double> tt, ly;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= 2.0 * out.t_cross && y[i] > 0.0 && std::isfinite(y[i])) {
            tt.push_back(t[i]);
            ly.push_back(std::log(y[i]));
        }
    if (tt.size() < 5) throw RangeError("too few samples past the crossover; extend t_max");
    out.late_rate = -linear_fit(tt, ly).second;
    return out;
}

std::vector<double> crossover_series(const Trajectory& trajectory, const WaveProfile& profile, double gamma_inf) {
    if (trajectory.u.empty()) return {};
    const int N = trajectory.u[0].N, m_x = trajectory.u[0].m_x;
    GridFunction back(N, m_x, 1);
    back.values.setConstant(-gamma_inf / N);
    const WaveOnGrid wave(profile, N, m_x);
    // u - phi(. + s) = w - (phi(. + s) - phi)
    const GridFunction offset = shifted_difference(profile, N, m_x, back);
    std::vector<double> y;
    GridFunction scratch;
    for (std::size_t j = 0; j < trajectory.u.size(); ++j)
        y.push_back(norm_hs(perturbation_at(trajectory, j, wave, scratch) - offset, 1.0));
    return y;
}

double trace_agreement(const ModulationTrace& a, const ModulationTrace& b, double t_from) {
    if (a.t != b.t) throw ArgumentError("traces use different time grids");
    double dg = 0.0, g = 0.0, dpsi = 0.0, psi = 0.0, dv = 0.0, v = 0.0;
    for (std::size_t j = 0; j < a.t.size(); ++j) {
        if (a.t[j] < t_from) continue;
        dg = std::max(dg, std::abs(a.gamma[j] - b.gamma[j]));
        g = std::max(g, std::abs(a.gamma[j]));
        dpsi = std::max(dpsi, norm_l2(a.psi[j] - b.psi[j]));
        psi = std::max(psi, norm_l2(a.psi[j]));
        dv = std::max(dv, norm_l2(a.v[j] - b.v[j]));
        v = std::max(v, norm_l2(a.v[j]));
    }
    auto rel = [](double d, double s) { return s > 0.0 ? d / s : d; };
    return std::max({rel(dg, g), rel(dpsi, psi), rel(dv, v)});
}

Experiment run_experiment(const WaveProfile& profile, const SimulationConfig& config) {
    Experiment ex;
    ExperimentReport& rep = ex.report;
    const int N = config.N, m_x = config.m_x, K = config.K;

    BlochOptions bo;
    bo.m = std::max(config.stability_modes, profile.m_f);
    bo.scan = config.stability_scan;
    const StabilityReport stability = verify_diffusive_stability(profile, bo);
    rep.verdict = stability.verdict;
    if (!stability.verdict) rep.notes.push_back("wave is not diffusively spectrally stable; results are indicative only");
    rep.xi_1 = config.cutoff_xi1 > 0.0 ? config.cutoff_xi1 : std::min(stability.xi_1, std::numbers::pi);
    rep.delta_N = N > 1 ? subharmonic_spectrum(profile, N, bo).delta_N : stability.gap_at_zero;

    const WaveOnGrid wave(profile, N, m_x);
    const PerturbationSpec& spec = config.perturbation;
    GridFunction v0;
    if (spec.shape == "translate") {
        GridFunction back(N, m_x, 1);
        back.values.setConstant(-spec.amplitude);
        v0 = shifted_difference(profile, N, m_x, back);
    } else if (spec.shape == "phase") {
        const double center = spec.center < 0.0 ? 0.5 * N : spec.center;
        GridFunction bump(N, m_x, 1);
        for (int j = 0; j < bump.points(); ++j) {
            const double d = (bump.x(j) - center) / spec.width;
            bump.values(j, 0) = std::exp(-0.5 * d * d);
        }
        v0 = scale_by(bump, wave.dphi);
        v0 = cplx{spec.amplitude == 0.0 ? 0.0 : spec.amplitude / perturbation_size(v0, spec.normalization, K)} * v0;
    } else {
        v0 = make_perturbation(spec, N, m_x, profile.n(), K);
    }
    const GridFunction u0 = wave.phi + v0;
    rep.E0 = norm_l1(v0) + norm_hs(v0, K);
    if (rep.E0 > config.epsilon)
        throw ArgumentError("E_0 = " + std::to_string(rep.E0) + " exceeds the smallness radius " +
                            std::to_string(config.epsilon));
    config.validate(profile, &u0);

    const SemigroupEngine engine(profile, N, m_x, CutoffSpec{rep.xi_1});
    ex.trajectory = integrate_perturbation(profile, v0, config, &engine);
    rep.steps = int(std::lround(config.t_max / config.dt));
    rep.gamma_linear = engine.projection(bloch_transform(v0), engine.grid().zero_index).real();

    const bool want_proj = config.extraction != ExtractionMode::Duhamel;
    const bool want_duh = config.extraction != ExtractionMode::Projection;
    if (want_proj) ex.projection = projection_trace(engine, ex.trajectory, K);
    if (want_duh)
        ex.duhamel = extract_modulation_duhamel(engine, ex.trajectory, config.chi, K,
                                                {config.duhamel_tol, config.duhamel_max_iter});
    if (want_proj && want_duh) rep.extraction_gap = trace_agreement(*ex.projection, *ex.duhamel);
    const ModulationTrace& tr = want_proj ? *ex.projection : *ex.duhamel;
    for (std::size_t j = 0; j < tr.t.size(); ++j)
        rep.trace_sup = std::max({rep.trace_sup, std::abs(tr.gamma[j]), tr.norms[j].v_hk, tr.norms[j].grad_hk});

    std::vector<double> comp, grad;
    for (const auto& nm : tr.norms) {
        comp.push_back(nm.composite_hk);
        grad.push_back(nm.grad_hk);
    }
    const double hi = double(N) * N / 10.0;
    try {
        rep.composite_fit = measure_decay(tr.t, comp, -0.75, 10.0, hi, {.envelope = true});
        rep.gradient_fit = measure_decay(tr.t, grad, -0.75, 10.0, hi, {.envelope = true});
    } catch (const ArgumentError& e) {
        rep.notes.push_back(std::string("rate fits skipped: ") + e.what());
    }
    for (std::size_t j = 0; j < tr.t.size(); ++j)
        if (tr.t[j] <= 10.0) rep.zeta_10 = tr.zeta[j];
    rep.zeta_max = tr.zeta.empty() ? 0.0 : tr.zeta.back();

    const bool zero_run = sup_finite(comp) == 0.0 && sup_finite(tr.gamma) == 0.0;
    if (!zero_run) {
        try {
            rep.phase = phase_convergence(tr, profile, ex.trajectory.w.back());
        } catch (const RangeError& e) {
            rep.notes.push_back(e.what());
        }
        const double gamma_inf = rep.phase ? rep.phase->gamma_inf : tr.gamma.back();
        try {
            rep.crossover = crossover_fit(tr.t, crossover_series(ex.trajectory, profile, gamma_inf), 10.0, hi);
        } catch (const std::exception& e) {
            rep.notes.push_back(std::string("crossover: ") + e.what());
        }
    }
    std::vector<double> thetas;
    for (double f : {0.125, 0.25, 0.5, 1.0, 2.0}) thetas.push_back(f * rep.delta_N);
    rep.damping = damping_check(tr, thetas);
    rep.damping_constant_half_gap = rep.damping->constant[2];
    return ex;
}

std::vector<ReportCheck> experiment_checks(const ExperimentReport& r) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ReportCheck> out;
    if (r.E0 == 0.0) {
        out.push_back({"zero_trace", r.trace_sup, "== 0", r.trace_sup == 0.0});
        return out;
    }
    auto add = [&](std::string name, double value, std::string bound, bool pass) {
        out.push_back({std::move(name), value, std::move(bound), pass && std::isfinite(value)});
    };
    const double comp = r.composite_fit ? r.composite_fit->exponent : nan;
    add("composite_slope", comp, "<= -0.6", comp <= -0.6);
    const double ratio = r.zeta_max / r.zeta_10;
    add("zeta_ratio", ratio, "<= 4", ratio <= 4.0);
    const double gt = r.phase ? r.phase->gamma_t_fit.exponent : nan;
    add("gamma_t_slope", gt, "<= -1.2", gt <= -1.2);
    const double rel = r.phase ? std::abs(r.phase->gamma_inf - r.gamma_linear) / std::abs(r.gamma_linear) : nan;
    add("gamma_inf_relative", rel, "<= 10 E0", rel <= 10.0 * r.E0);
    const double late = r.crossover ? r.crossover->late_rate / r.delta_N : nan;
    add("late_rate_over_delta_N", late, "in [0.5, 1.1]", late >= 0.5 && late <= 1.1);
    add("damping_constant", r.damping_constant_half_gap, "finite", std::isfinite(r.damping_constant_half_gap));
    const double viol = r.damping ? double(r.damping->violations) : nan;
    add("damping_violations", viol, "== 0", viol == 0.0);
    return out;
}

}  // namespace subharm
