#pragma once

#include <span>
#include <vector>

namespace subharm {

/// Power-law fit log y = log C + p log(1 + t) over a window.
struct DecayFit {
    std::vector<double> t;
    std::vector<double> norms;
    double exponent = 0.0;
    double constant = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int samples = 0;
    double claimed_exponent = 0.0;
    /// max over the whole series of norm * (1 + t)^{-claimed}
    double envelope_constant = 0.0;
    /// log y is better explained as linear in t than in log(1+t)
    bool super_polynomial = false;
};

struct DecayFitOptions {
    bool envelope = false;  ///< fit the running max taken from the right (for oscillating series)
};

DecayFit measure_decay(std::span<const double> t, std::span<const double> norms, double claimed_exponent,
                       double t_lo, double t_hi, const DecayFitOptions& options = {});

/// Running maximum from the right: env[i] = max_{j >= i} y[j].
std::vector<double> upper_envelope(std::span<const double> y);

/// Ordinary least squares y = a + b x; returns {a, b}.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

/// n points log-spaced on [lo, hi], lo > 0.
std::vector<double> logspace(double lo, double hi, int n);

/// log of (1/N) sum_{xi in Omega_N, xi != 0} xi^{2r} e^{-2 d xi^2 t}; -inf for N = 1.
double log_lattice_sum(double d, int r, int N, double t);
double lattice_sum(double d, int r, int N, double t);
/// (1/2pi) int_{-pi}^{pi} xi^{2r} e^{-2 d xi^2 t} d xi by adaptive Gauss-Kronrod.
double continuum_sum(double d, int r, double t);

struct SumBoundRow {
    int N;
    int r;
    double t;
    double sum;
    double envelope_ratio;  ///< sum (1 + t)^{r + 1/2}
};

struct SumBoundTable {
    std::vector<SumBoundRow> rows;
    std::vector<std::pair<int, double>> c_min;  ///< per N, max envelope ratio
    double c_global = 0.0;
    double c_continuum = 0.0;  ///< sup over the t grid of the continuum integral times (1+t)^{r+1/2}
};

SumBoundTable sum_bound_check(double d, int r, std::span<const int> N_list, std::span<const double> t_grid);

struct CrossoverProbe {
    int N = 0;
    int r = 0;
    bool degenerate = false;  ///< Omega_N \ {0} is empty
    double t_star = 0.0;      ///< first t where the sum falls below half the continuum envelope
    double late_rate = 0.0;   ///< fitted exponential rate on t > 4 t_star
    double expected_rate = 0.0;  ///< 2 d (2 pi / N)^2
    double t_max = 0.0;
};

/// t_max <= 0 picks 2 N^2 / d.
CrossoverProbe crossover_probe(double d, int N, int r, double t_max = 0.0, int samples = 2000);

}  // namespace subharm
