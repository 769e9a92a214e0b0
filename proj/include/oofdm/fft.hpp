#pragma once

#include <span>
#include <vector>

#include "oofdm/waveform.hpp"

namespace oofdm {

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 FFT, forward convention e^{-j2pikn/N}. inverse=true
// applies the conjugate transform and scales by 1/N.
void fft_inplace(std::vector<cdouble>& a, bool inverse);

// Forward DFT of a real or complex sequence (length must be a power of two).
std::vector<cdouble> dft(std::span<const double> x);
std::vector<cdouble> dft(std::span<const cdouble> x);

// Inverse DFT (complex output, 1/N scaling).
std::vector<cdouble> idft(std::span<const cdouble> spectrum);

// Inverse DFT of a Hermitian-symmetric spectrum. The imaginary residue is
// checked against `tol` (relative to the output scale) and discarded; a
// non-Hermitian input raises ConfigError.
std::vector<double> idft_real(std::span<const cdouble> spectrum, double tol = 1e-9);

}  // namespace oofdm
