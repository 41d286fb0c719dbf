#pragma once

#include "subharm/fft.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace subharm {

/// Samples of an N-periodic function on x_j = j / m_x, j = 0 .. N m_x - 1; rows are points,
/// columns components. Complex storage; physical fields are real up to rounding.
struct GridFunction {
    int N = 0;
    int m_x = 0;
    Eigen::MatrixXcd values;

    GridFunction() = default;
    GridFunction(int N_, int m_x_, int n);
    GridFunction(int N_, int m_x_, Eigen::MatrixXcd vals);
    static GridFunction from_real(int N_, int m_x_, const Eigen::MatrixXd& vals);

    int points() const { return N * m_x; }
    int n() const { return int(values.cols()); }
    double x(int j) const { return double(j) / m_x; }
    double h() const { return 1.0 / m_x; }

    Eigen::MatrixXd real() const { return values.real(); }
    double max_imag() const;
};

void check_compatible(const GridFunction& a, const GridFunction& b);

/// Global Fourier data: coeffs(m_slot, comp) with c_m = DFT / P, so g(x_j) = sum_m c_m e^{i omega_m x_j},
/// omega_m = 2 pi m / N for signed m.
Eigen::MatrixXcd fourier_coefficients(const GridFunction& g);
GridFunction from_fourier(int N, int m_x, const Eigen::MatrixXcd& coeffs);
double grid_frequency(int slot, int N, int points);

double norm_l1(const GridFunction& g);  ///< trapezoid, Euclidean norm over components
double norm_l2(const GridFunction& g);
double norm_hs(const GridFunction& g, double s);  ///< (sum N (1 + omega^2)^s |c|^2)^{1/2}
double norm_sup(const GridFunction& g);
cplx inner_l2(const GridFunction& f, const GridFunction& g);  ///< int_0^N conj(f) . g

/// Spectral derivative of order `order`; the unpaired Nyquist mode is dropped for odd orders.
GridFunction derivative(const GridFunction& g, int order = 1);
/// Trigonometric interpolation at arbitrary points (Nyquist mode split symmetrically).
Eigen::MatrixXcd interpolate(const GridFunction& g, std::span<const double> points);

/// Pointwise product of a scalar field with each component.
GridFunction scale_by(const GridFunction& scalar, const GridFunction& g);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(cplx s, const GridFunction& a);

/// Bloch components B_1(g)(xi, .) for xi in Omega_N as 1-periodic Fourier data,
/// modes l in [-L, L] with L = (m_x - 1) / 2, component-major (comp * (2L+1) + l + L).
struct BlochDecomposition {
    int N = 0;
    int L = 0;
    int n = 0;
    std::vector<Eigen::VectorXcd> components;  ///< indexed like omega_grid(N).xi

    int modes() const { return 2 * L + 1; }
    int dim() const { return n * modes(); }
    static BlochDecomposition zeros(int N, int L, int n);
};

/// One DFT of length N m_x plus reindexing m = j + l N. Requires odd m_x >= 3 so the partition
/// of global modes into (xi, l) pairs is exact and symmetric.
BlochDecomposition bloch_transform(const GridFunction& g);
/// g(x) = (1/N) sum_xi e^{i xi x} B_1(g)(xi, x).
GridFunction inverse_bloch(const BlochDecomposition& dec);

/// |<f,g>_{L^2_N} - (1/N) sum_xi <B_1 f, B_1 g>_{L^2(0,1)}|
double parseval_gap(const GridFunction& f, const GridFunction& g);

/// Norms evaluated on Bloch data by Parseval.
double bloch_norm_l2(const BlochDecomposition& dec);
double bloch_norm_hs(const BlochDecomposition& dec, double s);

BlochDecomposition operator+(const BlochDecomposition& a, const BlochDecomposition& b);
BlochDecomposition operator-(const BlochDecomposition& a, const BlochDecomposition& b);

}  // namespace subharm
