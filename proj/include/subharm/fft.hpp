#pragma once

#include <complex>
#include <span>
#include <vector>

namespace subharm {

using cplx = std::complex<double>;

/// Unnormalized complex DFT of length n through FFTW with per-thread plan reuse.
///   forward:  X_m = sum_j x_j e^{-2 pi i j m / n}
///   backward: x_j = sum_m X_m e^{+2 pi i j m / n}
void fft_forward(std::span<const cplx> in, std::span<cplx> out);
void fft_backward(std::span<const cplx> in, std::span<cplx> out);

std::vector<cplx> fft_forward(std::span<const cplx> in);
std::vector<cplx> fft_backward(std::span<const cplx> in);

/// Signed frequency index of DFT slot j for length n: j for j < n/2 (rounded up), j - n otherwise.
/// For even n the Nyquist slot n/2 maps to -n/2.
inline int signed_index(int j, int n) { return (2 * j < n) ? j : j - n; }

/// DFT slot of signed frequency m for length n.
inline int slot_of(int m, int n) { return ((m % n) + n) % n; }

}  // namespace subharm
