#include "subharm/linear_decay.hpp"

#include "subharm/errors.hpp"
#include "subharm/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace subharm {

LinearDecayStudy linear_decay_study(const WaveProfile& profile, int N, const LinearDecayOptions& options) {
    if (N < 2) throw ArgumentError("linear decay needs N >= 2");
    const double t_hi = options.t_hi > 0.0 ? options.t_hi : std::max(double(N) * N / 10.0, 2.0 * options.t_lo);
    if (!(t_hi > options.t_lo) || options.t_lo <= 0.0) throw RangeError("fit window [t_lo, t_hi] is empty; raise N or t_hi");

    double xi_1 = options.xi_1;
    if (xi_1 <= 0.0) {
        BlochOptions bo;
        bo.m = std::max(16, profile.m_f);
        xi_1 = std::min(verify_diffusive_stability(profile, bo).xi_1, std::numbers::pi);
    }
    const SemigroupEngine engine(profile, N, options.m_x, CutoffSpec{xi_1});

    PerturbationSpec spec;
    spec.amplitude = 1.0;
    spec.seed = options.seed;
    spec.shape = options.shape;
    spec.normalization = "l1";
    const BlochDecomposition g = bloch_transform(make_perturbation(spec, N, options.m_x, profile.n()));

    LinearDecayStudy out;
    out.N = N;
    out.l = options.l;
    out.m = options.m;
    // early times feed the envelope constants, the fit uses [t_lo, t_hi] only
    out.t = {0.0};
    for (double t : logspace(0.01, options.t_lo, 16)) out.t.push_back(t);
    const auto window = logspace(options.t_lo, t_hi, options.samples);
    out.t.insert(out.t.end(), window.begin() + 1, window.end());
    auto sp_norm = [&](double t, int l, int m) { return norm_l2(engine.lattice_field(engine.sp_coefficients(g, t, l, m))); };
    for (double t : out.t) {
        out.sp.push_back(sp_norm(t, 0, 0));
        out.sp_x.push_back(sp_norm(t, 1, 0));
        out.sp_t.push_back(sp_norm(t, 0, 1));
        out.custom.push_back(sp_norm(t, options.l, options.m));
        const auto parts = engine.decompose(g, t);
        out.total.push_back(bloch_norm_l2(parts.total));
        out.mean.push_back(bloch_norm_l2(parts.mean_term));
        out.stilde.push_back(bloch_norm_l2(parts.stilde));
    }
    const double lo = options.t_lo;
    out.fit_sp = measure_decay(out.t, out.sp, -0.25, lo, t_hi);
    out.fit_sp_x = measure_decay(out.t, out.sp_x, -0.75, lo, t_hi);
    out.fit_sp_t = measure_decay(out.t, out.sp_t, -0.75, lo, t_hi);
    out.fit_custom = measure_decay(out.t, out.custom, -0.25 - 0.5 * (options.l + options.m), lo, t_hi);
    out.fit_stilde = measure_decay(out.t, out.stilde, -0.75, lo, t_hi);
    return out;
}

}  // namespace subharm
