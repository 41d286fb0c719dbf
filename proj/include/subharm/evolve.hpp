#pragma once

#include "subharm/decay.hpp"
#include "subharm/perturbation.hpp"
#include "subharm/semigroup.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace subharm {

/// phi_k(z) = sum_j z^j / (j + k)!, k = 0 .. 3.
std::array<cplx, 4> phi_functions(cplx z);

/// Weights (w_a, w_b) with int_0^h e^{lambda (h - s)} [(1 - s/h) a + (s/h) b] ds = w_a a + w_b b.
std::pair<cplx, cplx> linear_exp_weights(cplx lambda, double h);

/// Finite-difference weights for the derivative of order `order` at x0 from samples at xs (Fornberg).
std::vector<double> fd_weights(double x0, std::span<const double> xs, int order);

/// First derivative of a sampled series with five-point (fourth-order) stencils on a nonuniform grid.
std::vector<double> time_derivative(std::span<const double> t, std::span<const double> y);

enum class Scheme {
    ImexCN,      ///< Crank-Nicolson on k d_xx + c d_x, second-order Adams-Bashforth on f/k
    ETDRK4,      ///< exponential RK4 on the same splitting
    ETDRK4Bloch  ///< exponential RK4 for w = u - phi with the full linearization exact per Bloch frequency
};

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme scheme);

/// zero for t <= t0, one for t >= t1, quintic smoothstep in between.
struct TimeCutoff {
    double t0 = 0.5;
    double t1 = 1.0;
    double operator()(double t) const;
    double derivative(double t) const;
};

enum class ExtractionMode { Projection, Duhamel, Both };
ExtractionMode parse_extraction(const std::string& name);
std::string extraction_name(ExtractionMode mode);

struct SimulationConfig {
    int N = 16;
    int m_x = 33;
    double dt = 0.01;
    double t_max = 100.0;
    Scheme scheme = Scheme::ETDRK4;
    int K = 3;
    double snapshot_stride = 0.25;    ///< uniform stride on [0, snapshot_uniform_until]
    double snapshot_uniform_until = 10.0;
    double snapshot_growth = 1.03;    ///< geometric growth of the stride afterwards
    /// shape "translate" starts from phi(x + amplitude); shape "phase" from phi + a G(x) phi'(x) with a
    /// Gaussian bump G of the configured width centred in the domain, scaled like the random shapes
    PerturbationSpec perturbation;
    double epsilon = 0.1;             ///< largest admissible E_0
    ExtractionMode extraction = ExtractionMode::Projection;
    double cutoff_xi1 = 0.0;          ///< 0: take xi_1 from the stability report
    TimeCutoff chi;
    double duhamel_tol = 1e-8;
    int duhamel_max_iter = 25;
    int stability_modes = 16;         ///< Bloch truncation for the stability report
    int stability_scan = 128;

    /// Checks sizes and the explicit-part step heuristic dt <= 0.5 / ||J||_inf for the
    /// explicitly treated Jacobian J at the initial state.
    void validate(const WaveProfile& profile, const GridFunction* initial = nullptr) const;
};

/// Fixed-step integrator for k u_t - k c u_x = k^2 u_xx + f(u) in the co-moving frame,
/// i.e. u_t = k u_xx + c u_x + f(u) / k on the N-cell grid.
class Integrator {
public:
    /// ETDRK4Bloch needs the engine's eigenbases; the engine must outlive the integrator.
    Integrator(const WaveProfile& profile, int N, int m_x, double dt, Scheme scheme,
               const SemigroupEngine* engine = nullptr);
    ~Integrator();
    Integrator(const Integrator&) = delete;
    Integrator& operator=(const Integrator&) = delete;

    void set_state(const GridFunction& u, double t = 0.0);
    /// Starts from phi + w.
    void set_perturbation(const GridFunction& w, double t = 0.0);
    GridFunction state() const;
    /// state() - phi; carried directly by the Bloch scheme, so small perturbations keep full precision.
    GridFunction perturbation() const;
    double time() const { return t_; }
    /// Advances one step; BlowUpError when the state stops being finite.
    void step();
    void advance_to(double t_end);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double t_ = 0.0;
};

/// One step from `state` (imex-cn starts with a first-order explicit part).
GridFunction step(const WaveProfile& profile, const GridFunction& state, double dt, Scheme scheme);

/// Snapshot times: multiples of dt following the configured stride rule, always including 0 and t_max.
std::vector<double> snapshot_times(const SimulationConfig& config);

struct Trajectory {
    std::vector<double> t;
    std::vector<GridFunction> u;
    std::vector<GridFunction> w;  ///< u - phi
};

Trajectory integrate(const WaveProfile& profile, const GridFunction& u0, const SimulationConfig& config,
                     const SemigroupEngine* engine = nullptr);
/// Same, starting from phi + w0.
Trajectory integrate_perturbation(const WaveProfile& profile, const GridFunction& w0, const SimulationConfig& config,
                                  const SemigroupEngine* engine = nullptr);

/// Grid samples of phi and phi' shared by the extraction routines.
struct WaveOnGrid {
    WaveProfile profile;
    GridFunction phi;
    GridFunction dphi;
    WaveOnGrid(const WaveProfile& profile, int N, int m_x);
};

struct ModulationSnapshot {
    double gamma = 0.0;
    GridFunction psi;    ///< scalar
    GridFunction psi_x;  ///< scalar
    GridFunction v;
};

/// gamma = <Phi~_0, u - phi>_{L^2_N}, psi = s_p(0)(u - phi), v(x) = u(x - gamma/N - psi(x)) - phi(x).
ModulationSnapshot extract_modulation_projection(const SemigroupEngine& engine, const WaveOnGrid& wave,
                                                 const GridFunction& u);
ModulationSnapshot extract_modulation_projection(const WaveProfile& profile, const GridFunction& u,
                                                 const CutoffSpec& cutoff);
/// Same extraction from the perturbation w = u - phi; keeps full relative precision for small w.
ModulationSnapshot extract_modulation_perturbation(const SemigroupEngine& engine, const WaveOnGrid& wave,
                                                   const GridFunction& w);

/// u(x - shift(x)) by trigonometric interpolation.
GridFunction warp(const GridFunction& u, const GridFunction& shift);

struct NonlinearResiduals {
    GridFunction Q;
    GridFunction R;
    GridFunction Nres;  ///< (Q + k R_x) / k
};

NonlinearResiduals nonlinear_residuals(const WaveProfile& profile, const WaveOnGrid& wave, const GridFunction& v,
                                       const GridFunction& psi_x, const GridFunction& psi_t, double gamma_t);
NonlinearResiduals nonlinear_residuals(const WaveProfile& profile, const GridFunction& v, const GridFunction& psi,
                                       const GridFunction& psi_x, const GridFunction& psi_t, double gamma_t, int N);

struct TraceNorms {
    double v_hk = 0.0;         ///< ||v||_{H^K}
    double v_l2 = 0.0;
    double psi_x_hk1 = 0.0;    ///< ||psi_x||_{H^{K+1}}
    double psi_t_hk = 0.0;     ///< ||psi_t||_{H^K}
    double gamma_t_abs = 0.0;
    double composite_hk = 0.0; ///< ||u(. - gamma/N - psi) - phi||_{H^K}
    double grad_hk = 0.0;      ///< ||(psi_x, psi_t + gamma_t/N)||_{H^K}
};

struct ModulationTrace {
    std::string mode;
    int N = 0;
    int K = 3;
    std::vector<double> t;
    std::vector<double> gamma;
    std::vector<double> gamma_t;
    std::vector<GridFunction> psi, psi_x, psi_t, v;
    std::vector<TraceNorms> norms;
    std::vector<double> zeta;
    std::vector<std::string> failures;  ///< per snapshot, empty when extraction succeeded
    int iterations = 0;                 ///< duhamel only
    double update_norm = 0.0;           ///< last sup_t (||d psi|| + |d gamma|)
    double v2_defect = 0.0;             ///< relative defect of the v equation at the returned trace
};

/// Projection extraction at every snapshot; failures are recorded and leave NaN entries.
ModulationTrace projection_trace(const SemigroupEngine& engine, const Trajectory& trajectory, int K);

struct DuhamelOptions {
    double tol = 1e-8;
    int max_iter = 25;
};

/// Fixed-point solve of the implicit modulation equations on the snapshot grid.
ModulationTrace extract_modulation_duhamel(const SemigroupEngine& engine, const Trajectory& trajectory,
                                           const TimeCutoff& chi, int K, const DuhamelOptions& options = {});

/// Fills norms and zeta from the trace fields and the trajectory.
void compute_trace_norms(ModulationTrace& trace, const WaveOnGrid& wave, const Trajectory& trajectory);

/// Running sup of (||v||^2_{H^K} + ||psi_x||^2_{H^{K+1}} + ||psi_t||^2_{H^K} + |gamma_t|)^{1/2} (1+s)^{3/4}.
std::vector<double> zeta_diagnostic(const ModulationTrace& trace);

struct DampingCheck {
    std::vector<double> theta;
    std::vector<double> constant;  ///< minimal C per theta (infinity when infeasible)
    double best_theta = 0.0;
    double best_constant = 0.0;
    int violations = 0;            ///< snapshots with positive left side and vanishing right side at best theta
    double max_violation = 0.0;
};

DampingCheck damping_check(const ModulationTrace& trace, std::span<const double> theta_grid);

struct PhaseConvergence {
    double gamma_inf = 0.0;
    DecayFit gamma_t_fit;      ///< |gamma_t| envelope
    DecayFit gamma_gap_fit;    ///< |gamma - gamma_inf| envelope
    double sigma_inf = 0.0;    ///< best rigid translate at t_max
    double sigma_gap = 0.0;    ///< |sigma_inf - gamma_inf / N|
};

/// w_final is the perturbation u - phi at the last snapshot.
PhaseConvergence phase_convergence(const ModulationTrace& trace, const WaveProfile& profile,
                                   const GridFunction& w_final, double t_lo = 10.0, double t_hi = -1.0);

struct CrossoverFit {
    double t_cross = 0.0;
    double late_rate = 0.0;
    DecayFit power_fit;
};

/// Knee: first t past the power-law window where y drops below half the fitted power law;
/// the late exponential rate is fitted on [2 t_cross, t_max].
CrossoverFit crossover_fit(std::span<const double> t, std::span<const double> y, double power_lo,
                           double power_hi);

/// ||u(., t) - phi(. + gamma_inf / N)||_{H^1_N} along the trajectory.
std::vector<double> crossover_series(const Trajectory& trajectory, const WaveProfile& profile, double gamma_inf);

struct ExperimentReport {
    double E0 = 0.0;
    double delta_N = 0.0;
    double xi_1 = 0.0;
    bool verdict = false;
    int steps = 0;
    std::optional<DecayFit> composite_fit;
    std::optional<DecayFit> gradient_fit;
    double zeta_10 = 0.0;
    double zeta_max = 0.0;
    std::optional<PhaseConvergence> phase;
    double gamma_linear = 0.0;  ///< <Phi~_0, v(0)>_{L^2_N}
    std::optional<CrossoverFit> crossover;
    std::optional<DampingCheck> damping;
    double damping_constant_half_gap = 0.0;  ///< C at theta = delta_N / 2
    double extraction_gap = 0.0;  ///< projection vs duhamel, when both ran
    double trace_sup = 0.0;       ///< sup_t max(|gamma|, ||v||_{H^K}, gradient norm)
    std::vector<std::string> notes;
};

struct Experiment {
    Trajectory trajectory;
    std::optional<ModulationTrace> projection;
    std::optional<ModulationTrace> duhamel;
    ExperimentReport report;
};

/// Integrates phi + perturbation and runs the configured extraction and diagnostics.
Experiment run_experiment(const WaveProfile& profile, const SimulationConfig& config);

struct ReportCheck {
    std::string name;
    double value = 0.0;
    std::string bound;
    bool pass = false;
};

/// Decay, phase, crossover and damping properties of a finished run against fixed targets.
std::vector<ReportCheck> experiment_checks(const ExperimentReport& report);

/// sup_t of the gap in (gamma, psi, v) relative to sup_t of the projection values, for t >= t_from.
double trace_agreement(const ModulationTrace& a, const ModulationTrace& b, double t_from = 1.0);

}  // namespace subharm
