#pragma once

#include "subharm/profile.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace subharm {

/// Omega_N = { xi in [-pi, pi) : e^{i xi N} = 1 }, ascending.
struct FrequencyGrid {
    int N = 0;
    std::vector<double> xi;
    int zero_index = 0;
};

FrequencyGrid omega_grid(int N);
/// 2 pi j / N for the signed lattice index j.
double lattice_frequency(int j, int N);

struct BlochOptions {
    int m = 32;                      ///< Bloch truncation order, modes [-m, m]; must be >= profile.m_f
    int scan = 256;                  ///< xi samples over [-pi, pi) for the stability scan
    double zero_tol = 1e-8;          ///< |lambda| below this counts as zero at xi = 0
    double angle_tol = 1e-6;         ///< max angle between the kernel vector and phi'
    double separation_fraction = 0.05;  ///< branch isolation threshold relative to the xi = 0 gap
    double ambiguity = 0.5;          ///< second-best normalized overlap that aborts tracking
    double condition_limit = 1e8;    ///< eigenvector condition number treated as defective
};

/// Truncated Bloch operator L_xi = e^{-i xi x} L e^{i xi x} with L = k d_xx + c d_x + Df(phi)/k,
/// acting on coefficient vectors laid out component-major: index = comp * (2m+1) + (l + m).
struct BlochMatrix {
    double xi = 0.0;
    int m = 0;
    int n = 0;
    Eigen::MatrixXcd entries;
};

/// Reusable assembler: caches the Fourier coefficients of Df(phi) once per profile.
class BlochAssembler {
public:
    BlochAssembler(const WaveProfile& profile, int m);
    BlochMatrix assemble(double xi) const;
    int m() const { return m_; }
    int n() const { return n_; }
    int dim() const { return n_ * (2 * m_ + 1); }
    /// Symbol of the constant-coefficient part at frequency mu = xi + 2 pi l.
    cplx symbol(double mu) const { return cplx{-k_ * mu * mu, c_ * mu}; }
    double k() const { return k_; }
    double c() const { return c_; }

private:
    int m_, n_;
    double k_, c_;
    std::vector<Eigen::VectorXcd> jac_;  // modes [-2m, 2m] of Df(phi) / k, entry (a, b) at a * n + b
};

BlochMatrix assemble_bloch(const WaveProfile& profile, double xi, int m);

struct BlochEigenpair {
    cplx value;
    Eigen::VectorXcd vector;  ///< unit L^2(0,1) norm; empty unless requested
};

/// All eigenvalues sorted by descending real part (ties: descending imaginary part).
std::vector<BlochEigenpair> bloch_spectrum(const BlochMatrix& matrix, bool want_vectors = false);

/// Full eigendecomposition with left eigenvectors, sorted as bloch_spectrum.
struct BlochEigenSystem {
    double xi = 0.0;
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  ///< unit columns
    Eigen::MatrixXcd inverse;  ///< vectors^{-1}; row j is the dual of column j
    double condition = 1.0;
    bool defective = false;
    Eigen::MatrixXcd matrix;  ///< the operator itself, kept for the defective fallback
};

BlochEigenSystem bloch_eigensystem(const BlochMatrix& matrix, double condition_limit = 1e8);

/// Critical eigenvalue branch through lambda = 0 at xi = 0.
/// Gauge: <phi', Phi_xi> = |phi'|^2 (so Phi_0 = phi'), <Phi~_xi, Phi_xi> = 1.
struct CriticalCurve {
    int m = 0;
    std::vector<double> xi;
    std::vector<cplx> lambda;
    std::vector<Eigen::VectorXcd> phi;
    std::vector<Eigen::VectorXcd> phi_tilde;
    double a = 0.0;  ///< Im lambda_c ~ a xi
    double d = 0.0;  ///< Re lambda_c ~ -d xi^2
    double xi_max = 0.0;

    std::size_t nearest(double x) const;
};

struct CriticalMode {
    double xi = 0.0;
    cplx lambda;
    Eigen::VectorXcd phi;
    Eigen::VectorXcd phi_tilde;
    int index = -1;  ///< position within the eigensystem it was taken from
};

/// Tracks the branch outward from xi = 0 on both sides with `samples` points per side.
CriticalCurve critical_curve(const WaveProfile& profile, double xi_max, int samples, const BlochOptions& options = {});

/// Identifies the critical eigenpair inside an eigensystem by overlap with the nearest curve sample
/// and returns it in the curve gauge. Throws RangeError outside the curve, TrackingError if ambiguous.
CriticalMode identify_critical(const CriticalCurve& curve, const BlochEigenSystem& system,
                               const Eigen::VectorXcd& profile_derivative, double ambiguity = 0.5);

/// Critical data at a single xi, tracked from 0 with steps of at most 0.02; |xi| must not exceed xi_1.
CriticalMode critical_mode_data(const WaveProfile& profile, double xi, double xi_1, const BlochOptions& options = {});

struct StabilityReport {
    bool verdict = false;
    bool spectral_ok = false;      ///< condition (i)
    bool quadratic_ok = false;     ///< condition (ii)
    bool simple_zero_ok = false;   ///< condition (iii)
    double theta = 0.0;
    double xi_1 = 0.0;
    double delta_1 = 0.0;
    double gap_at_zero = 0.0;      ///< -max Re of the non-critical spectrum at xi = 0
    double zero_simplicity = 0.0;  ///< second smallest |lambda| at xi = 0
    double zero_angle = 0.0;       ///< angle between the kernel vector and phi'
    double zero_modulus = 0.0;
    std::vector<std::pair<double, double>> delta_0;  ///< (xi_0, delta_0(xi_0))
    std::vector<double> scan_xi;
    std::vector<double> scan_max_re;      ///< max Re sigma(L_xi), excluding lambda_c(0) at xi = 0
    std::vector<double> scan_critical_re; ///< tracked Re lambda_c, NaN where untracked
    std::vector<std::string> details;
    BlochOptions options;
};

StabilityReport verify_diffusive_stability(const WaveProfile& profile, const BlochOptions& options = {});

struct TaggedEigenvalue {
    double xi;
    cplx value;
    bool critical;
};

struct SubharmonicGapReport {
    int N = 0;
    double delta_N = 0.0;
    double attaining_xi = 0.0;
    std::vector<TaggedEigenvalue> spectrum;
};

SubharmonicGapReport subharmonic_spectrum(const WaveProfile& profile, int N, const BlochOptions& options = {});

/// Angle between two coefficient vectors, in [0, pi/2].
double vector_angle(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

}  // namespace subharm
