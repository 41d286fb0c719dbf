#pragma once

#include "subharm/decay.hpp"
#include "subharm/semigroup.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace subharm {

struct LinearDecayOptions {
    int m_x = 33;
    double t_lo = 10.0;
    double t_hi = 0.0;     ///< 0: max(N^2 / 10, 2 t_lo)
    int samples = 48;      ///< log-spaced times on [t_lo, t_hi]; 17 more cover [0, t_lo]
    std::uint64_t seed = 1;
    std::string shape = "localized";  ///< perturbation shape of the random v
    double xi_1 = 0.0;     ///< 0: take the cutoff radius from the stability report
    int l = 1;             ///< extra derivative pair d_x^l d_t^m s_p for the custom column
    int m = 1;
};

/// L^2_N norms of the linear pieces applied to one random L^1-normalized v. The fits'
/// envelope constants are sup_t norm (1 + t)^{-target} over all sampled t >= 0.
struct LinearDecayStudy {
    int N = 0;
    int l = 0, m = 0;
    std::vector<double> t;
    std::vector<double> total;  ///< ||e^{Lt} v||
    std::vector<double> mean;   ///< norm of the mean-phase term
    std::vector<double> sp, sp_x, sp_t, custom, stilde;
    DecayFit fit_sp;      ///< target -1/4
    DecayFit fit_sp_x;    ///< target -3/4
    DecayFit fit_sp_t;    ///< target -3/4
    DecayFit fit_custom;  ///< target -1/4 - (l + m)/2
    DecayFit fit_stilde;  ///< target -3/4
};

LinearDecayStudy linear_decay_study(const WaveProfile& profile, int N, const LinearDecayOptions& options = {});

}  // namespace subharm
