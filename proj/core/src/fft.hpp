#pragma once

#include <complex>
#include <span>

namespace hermscal::detail {

// Thin FFTW wrappers. Plans are cached per size and shared across threads;
// execution uses the new-array interface, so callers may pass any buffer.

// In-place forward complex DFT: x_k <- Σ_j x_j e^{−2πijk/n}.
void fft_forward(std::span<std::complex<double>> x);

// DCT-I (FFTW REDFT00), n ≥ 2: y_k = x_0 + (−1)^k x_{n−1} + 2 Σ_{j=1}^{n−2} x_j cos(πjk/(n−1)).
void dct1(std::span<const double> in, std::span<double> out);

// DCT-II (FFTW REDFT10): y_k = 2 Σ_j x_j cos(πk(2j+1)/(2n)).
void dct2(std::span<const double> in, std::span<double> out);

}  // namespace hermscal::detail
