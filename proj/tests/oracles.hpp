#pragma once
// Independent closed forms used as test oracles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

// Linearization of the real Ginzburg-Landau wave A e^{2 pi i y}, k = q / 2pi, in the co-rotating
// frame w = e^{-2 pi i y} u - A is constant-coefficient:
//   k p_t = k^2 p'' - 4 pi k^2 r' - 2 A^2 p,   k r_t = k^2 r'' + 4 pi k^2 p'.
// A Bloch mode e^{i mu y} therefore has eigenvalues
//   (-k^2 mu^2 - A^2 +- sqrt(A^4 + 16 pi^2 k^4 mu^2)) / k.
inline std::pair<double, double> rgl_branch_pair(double q, double mu) {
    const double k = q / two_pi, A2 = 1.0 - q * q;
    const double root = std::sqrt(A2 * A2 + 4.0 * two_pi * two_pi * k * k * k * k * mu * mu);
    return {(-k * k * mu * mu - A2 + root) / k, (-k * k * mu * mu - A2 - root) / k};
}

// Critical eigenvalue lambda_c(xi) (the + branch of the l = 0 co-rotating mode).
inline double rgl_lambda_c(double q, double xi) { return rgl_branch_pair(q, xi).first; }

inline double rgl_diffusion(double q) { return q / two_pi * (1.0 - 3.0 * q * q) / (1.0 - q * q); }

// All co-rotating eigenvalues with |l| <= lmax, sorted descending.
inline std::vector<double> rgl_spectrum(double q, double xi, int lmax) {
    std::vector<double> out;
    for (int l = -lmax; l <= lmax; ++l) {
        const auto [p, m] = rgl_branch_pair(q, xi + two_pi * l);
        out.push_back(p);
        out.push_back(m);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

// Fourier coefficients of Df(phi) for the rgl wave phi = A (cos 2 pi y, sin 2 pi y):
//   Df = (1 - 2A^2) I - A^2 [[cos 4 pi y, sin 4 pi y], [sin 4 pi y, -cos 4 pi y]].
// Returns entry (a, b) at Fourier index l in {-2, 0, 2}.
inline cplx rgl_jacobian_mode(double q, int a, int b, int l) {
    const double A2 = 1.0 - q * q;
    if (l == 0) return a == b ? cplx{1.0 - 2.0 * A2} : cplx{};
    if (std::abs(l) != 2) return {};
    const double s = l > 0 ? 1.0 : -1.0;
    if (a == b) return cplx{(a == 0 ? -1.0 : 1.0) * A2 / 2.0};
    return cplx{0.0, s * A2 / 2.0};  // -A^2 sin 4 pi y -> -A^2 (e - e^-1)/(2i)
}

}  // namespace oracle
