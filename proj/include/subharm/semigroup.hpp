#pragma once

#include "subharm/bloch.hpp"
#include "subharm/grid.hpp"

#include <vector>

namespace subharm {

/// Raised-cosine cutoff: 1 on |xi| <= xi_1/2, cos^2(pi (|xi| - xi_1/2) / xi_1) up to xi_1, 0 beyond.
struct CutoffSpec {
    double xi_1 = 0.0;
    double operator()(double xi) const;
};

struct SemigroupOptions {
    double condition_limit = 1e8;
    double ambiguity = 0.5;
    double branch_step = 0.02;  ///< sample spacing of the tracked critical curve
    int max_derivative = 3;     ///< cap on l and m in sp
};

/// e^{L t} on L^2_N, diagonalized once per xi in Omega_N, with the low/high-frequency and
/// critical-mode splitting built from the tracked critical branch.
class SemigroupEngine {
public:
    SemigroupEngine(const WaveProfile& profile, int N, int m_x, const CutoffSpec& cutoff,
                    const SemigroupOptions& options = {});

    int N() const { return N_; }
    int m_x() const { return m_x_; }
    int L() const { return L_; }
    int n() const { return n_; }
    const FrequencyGrid& grid() const { return grid_; }
    const CutoffSpec& cutoff() const { return cutoff_; }
    const WaveProfile& profile() const { return profile_; }

    /// True when some xi fell back to a direct matrix exponential (ill-conditioned eigenvectors).
    bool used_fallback() const { return fallback_; }
    bool has_critical(std::size_t idx) const { return critical_[idx].index >= 0; }
    cplx lambda_c(std::size_t idx) const { return critical_[idx].lambda; }
    const Eigen::VectorXcd& phi(std::size_t idx) const { return critical_[idx].phi; }
    const Eigen::VectorXcd& phi_tilde(std::size_t idx) const { return critical_[idx].phi_tilde; }
    const Eigen::VectorXcd& profile_derivative() const { return dphi_; }
    double rho(std::size_t idx) const { return rho_[idx]; }
    /// Eigenvalues of L_xi (descending real part).
    const Eigen::VectorXcd& eigenvalues(std::size_t idx) const { return systems_[idx].values; }

    BlochDecomposition evolve(const BlochDecomposition& g, double t) const;

    /// Coordinates V^{-1} g_xi in the eigenbasis of each L_xi; NumericError if some xi fell back.
    std::vector<Eigen::VectorXcd> to_eigen(const BlochDecomposition& g) const;
    BlochDecomposition from_eigen(const std::vector<Eigen::VectorXcd>& z) const;
    GridFunction evolve(const GridFunction& v, double t) const;

    /// <Phi~_xi, g_xi>_{L^2(0,1)}; zero where no critical mode is attached.
    cplx projection(const BlochDecomposition& g, std::size_t idx) const;

    /// (1/N) <Phi~_0, v>_{L^2_N}.
    cplx mean_phase(const BlochDecomposition& g) const;

    /// Lattice coefficients of d_x^l d_t^m s_p(t) g: the field is sum_xi coef[xi] e^{i xi x}.
    std::vector<cplx> sp_coefficients(const BlochDecomposition& g, double t, int l = 0, int m = 0) const;
    /// Scalar grid field from lattice coefficients.
    GridFunction lattice_field(const std::vector<cplx>& coef) const;
    /// Bloch data of phi' * (sum_xi coef[xi] e^{i xi x}).
    BlochDecomposition times_derivative(const std::vector<cplx>& coef) const;

    struct Parts {
        cplx mean_phase;                 ///< (1/N) <Phi~_0, v>
        std::vector<cplx> sp;            ///< lattice coefficients of s_p(t) v
        BlochDecomposition total;        ///< e^{Lt} v
        BlochDecomposition mean_term;    ///< (1/N) phi' <Phi~_0, v>
        BlochDecomposition phase_term;   ///< phi' s_p(t) v
        BlochDecomposition high;         ///< S_hf
        BlochDecomposition low_tilde;    ///< S~_lf
        BlochDecomposition critical_tilde;  ///< S~_c
        BlochDecomposition stilde;       ///< S_hf + S~_lf + S~_c
    };

    Parts decompose(const BlochDecomposition& g, double t) const;

private:
    Eigen::VectorXcd evolve_component(std::size_t idx, const Eigen::VectorXcd& g, double t, bool drop_critical) const;

    WaveProfile profile_;
    int N_, m_x_, L_, n_;
    CutoffSpec cutoff_;
    SemigroupOptions options_;
    FrequencyGrid grid_;
    Eigen::VectorXcd dphi_;
    std::vector<BlochEigenSystem> systems_;
    std::vector<CriticalMode> critical_;
    std::vector<double> rho_;
    bool fallback_ = false;
};

GridFunction apply_semigroup(const WaveProfile& profile, const GridFunction& v, double t,
                             const SemigroupOptions& options = {});

struct SemigroupDecomposition {
    cplx mean_phase;
    GridFunction sp;      ///< scalar field s_p(t) v
    GridFunction stilde;  ///< S~(t) v
};

SemigroupDecomposition decompose_semigroup(const WaveProfile& profile, const GridFunction& v, double t,
                                           const CutoffSpec& cutoff, const SemigroupOptions& options = {});

GridFunction sp_apply(const WaveProfile& profile, const GridFunction& v, double t, int l, int m,
                      const CutoffSpec& cutoff, const SemigroupOptions& options = {});

/// Grid samples of the profile (or its derivative) replicated over N cells.
GridFunction profile_on_grid(const WaveProfile& profile, int N, int m_x, int deriv = 0);

}  // namespace subharm
