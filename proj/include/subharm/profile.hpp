#pragma once

#include "subharm/fft.hpp"
#include "subharm/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace subharm {

/// A 1-periodic stationary solution phi of k u_t - k c u_x = k^2 u_xx + f(u), stored as
/// Fourier coefficients phi(x) = sum_{|l| <= m_f} coeffs[comp][l + m_f] e^{2 pi i l x}.
struct WaveProfile {
    ReactionModel model;
    double k = 0.0;
    double c = 0.0;
    int m_f = 0;
    std::vector<Eigen::VectorXcd> coeffs;
    double residual_norm = 0.0;

    int n() const { return model.n(); }
    int modes() const { return 2 * m_f + 1; }
    cplx coeff(int comp, int l) const {
        return (l < -m_f || l > m_f) ? cplx{0.0, 0.0} : coeffs[comp](l + m_f);
    }
    /// Coefficients of d^order phi / dx^order, component-major, modes [-m_f, m_f].
    Eigen::VectorXcd stacked(int order = 0) const;
    /// Same as stacked() but zero-padded to modes [-m, m] (m >= m_f).
    Eigen::VectorXcd stacked_padded(int m, int order = 0) const;
};

enum class ProfileUnknowns {
    CoeffsAndSpeed,      ///< solve for coefficients and c at fixed k (default)
    CoeffsAndWavenumber  ///< solve for coefficients and k at fixed c
};

struct ProfileSolveOptions {
    double tol = 1e-10;
    int max_iter = 40;
    double derivative_floor = 1e-6;
};

/// Exact wave train of the real Ginzburg-Landau model:
/// phi(y) = sqrt(1 - q^2) (cos 2 pi y, sin 2 pi y), k = q / (2 pi), c = 0.
WaveProfile analytic_rgl_profile(double q, int m_f);

/// Starting guess for solve_profile: the exact wave for rgl (k from q), a small Hopf-mode
/// oscillation around the equilibrium for brusselator, a cosine around alpha for nagumo.
/// k <= 0 selects a model-dependent default.
WaveProfile default_guess(const ReactionModel& model, int m_f, double k = 0.0, double amplitude = 0.0);

/// Newton iteration on the dealiased Fourier-Galerkin profile equation, phase pinned by
/// <guess', phi>_{L^2(0,1)} = 0. Residual norms per iterate are appended to history if given.
WaveProfile solve_profile(const WaveProfile& guess, ProfileUnknowns unknowns = ProfileUnknowns::CoeffsAndSpeed,
                          const ProfileSolveOptions& options = {}, std::vector<double>* history = nullptr);

/// Natural-parameter continuation; returns `steps` converged profiles ending at `target`
/// (the input itself when steps == 0). param is a model parameter, "k", or "c";
/// for rgl, "q" also moves k = q / (2 pi).
std::vector<WaveProfile> continue_profile(const WaveProfile& profile, const std::string& param, double target, int steps,
                                          ProfileUnknowns unknowns = ProfileUnknowns::CoeffsAndSpeed,
                                          const ProfileSolveOptions& options = {});

/// Values of d^deriv phi at the given points; rows are points, columns components.
Eigen::MatrixXd evaluate_profile(const WaveProfile& profile, std::span<const double> points, int deriv = 0);

/// L^2(0,1) norm of k^2 phi'' + k c phi' + f(phi) sampled on 2(2 m_f + 1) points.
double profile_residual(const WaveProfile& profile);

/// L^2(0,1) norm of phi'.
double derivative_norm(const WaveProfile& profile);

/// Translate: returns phi(. + s).
WaveProfile shift_profile(const WaveProfile& profile, double s);

/// Zero-pad or truncate to a new truncation order.
WaveProfile resample_profile(const WaveProfile& profile, int m_f);

/// Fourier coefficients of the Jacobian Df(phi(x)): entry [a * n + b] holds modes
/// [-max_mode, max_mode] of the (a, b) entry. Exact for the polynomial built-ins.
std::vector<Eigen::VectorXcd> jacobian_coefficients(const WaveProfile& profile, int max_mode);

/// Samples phi on a uniform grid of `points` points of [0,1); rows are points.
Eigen::MatrixXd sample_profile(const WaveProfile& profile, int points, int deriv = 0);

}  // namespace subharm
