#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace oofdm {

using cdouble = std::complex<double>;

enum class SignalUnit { normalized, volts, milliamps };

// Sampled real-valued electrical signal.
struct RealWaveform {
    std::vector<double> samples;
    double sample_rate = 1.0;  // Hz
    SignalUnit unit = SignalUnit::normalized;

    std::size_t size() const { return samples.size(); }
};

// Complex baseband optical field envelope, units sqrt(W).
struct OpticalField {
    std::vector<cdouble> samples;
    double sample_rate = 1.0;  // Hz

    std::size_t size() const { return samples.size(); }
};

inline double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double mean_power(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

inline double rms(std::span<const double> x) { return std::sqrt(mean_power(x)); }

inline double stddev(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size()));
}

inline double mean_power(std::span<const cdouble> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return s / static_cast<double>(x.size());
}

inline bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace oofdm
