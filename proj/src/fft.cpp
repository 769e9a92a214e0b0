#include "oofdm/fft.hpp"

#include <cmath>
#include <numbers>

#include "oofdm/errors.hpp"

namespace oofdm {

namespace {

// Per-size twiddle cache, thread-local so concurrent sweeps need no locking.
const std::vector<cdouble>& twiddles(std::size_t n) {
    thread_local std::vector<std::vector<cdouble>> cache;  // indexed by log2(n)
    std::size_t lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    if (cache.size() <= lg) cache.resize(lg + 1);
    auto& tw = cache[lg];
    if (tw.size() != n / 2) {
        tw.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
            tw[k] = {std::cos(a), std::sin(a)};
        }
    }
    return tw;
}

}  // namespace

void fft_inplace(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw ConfigError("fft size must be a power of two, got " + std::to_string(n));
    if (n == 1) return;

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& tw = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cdouble w = tw[k * step];
                if (inverse) w = std::conj(w);
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= inv_n;
    }
}

std::vector<cdouble> dft(std::span<const double> x) {
    std::vector<cdouble> a(x.begin(), x.end());
    fft_inplace(a, false);
    return a;
}

std::vector<cdouble> dft(std::span<const cdouble> x) {
    std::vector<cdouble> a(x.begin(), x.end());
    fft_inplace(a, false);
    return a;
}

std::vector<cdouble> idft(std::span<const cdouble> spectrum) {
    std::vector<cdouble> a(spectrum.begin(), spectrum.end());
    fft_inplace(a, true);
    return a;
}

std::vector<double> idft_real(std::span<const cdouble> spectrum, double tol) {
    const std::size_t n = spectrum.size();
    if (n == 0) return {};
    if (!is_pow2(n)) throw ConfigError("idft_real: size must be a power of two");

    double scale = 0.0;
    for (const auto& v : spectrum) scale = std::max(scale, std::abs(v));
    const double eps = tol * std::max(scale, 1e-300);

    if (std::abs(spectrum[0].imag()) > eps)
        throw ConfigError("idft_real: DC bin is not real");
    if (n % 2 == 0 && std::abs(spectrum[n / 2].imag()) > eps)
        throw ConfigError("idft_real: Nyquist bin is not real");
    for (std::size_t k = 1; k < n / 2; ++k) {
        if (std::abs(spectrum[n - k] - std::conj(spectrum[k])) > eps)
            throw ConfigError("idft_real: spectrum is not Hermitian at bin " + std::to_string(k));
    }

    std::vector<cdouble> a(spectrum.begin(), spectrum.end());
    fft_inplace(a, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
    return out;
}

}  // namespace oofdm
