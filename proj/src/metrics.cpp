#include "oofdm/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "oofdm/errors.hpp"

namespace oofdm {

double evm(std::span<const cdouble> rx, std::span<const cdouble> ref) {
    if (rx.empty() || rx.size() != ref.size())
        throw ConfigError("evm: empty input or length mismatch");
    double err = 0.0, pwr = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        err += std::norm(rx[i] - ref[i]);
        pwr += std::norm(ref[i]);
    }
    if (pwr <= 0.0) throw ConfigError("evm: reference has zero power");
    return std::sqrt(err / pwr);
}

double q_from_evm(double evm_rms) {
    if (evm_rms <= 0.0) throw ConfigError("q_from_evm: evm must be positive");
    return -20.0 * std::log10(evm_rms);
}

double erfc_inv(double y) {
    if (y <= 0.0 || y >= 2.0) throw ConfigError("erfc_inv: argument outside (0, 2)");
    if (y == 1.0) return 0.0;
    // Rational normal-quantile seed (Abramowitz & Stegun 26.2.22), polished
    // with Newton iterations on erfc itself.
    const bool flip = y > 1.0;
    const double p = flip ? 2.0 - y : y;
    const double t = std::sqrt(-2.0 * std::log(0.5 * p));
    const double quantile =
        t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
    double x = quantile / std::numbers::sqrt2;
    const double c = 2.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < 4; ++i) {
        const double df = c * std::exp(-x * x);
        if (df <= 0.0 || !std::isfinite(df)) break;
        x += (std::erfc(x) - p) / df;
    }
    return flip ? -x : x;
}

double q_from_ber(double ber) {
    if (ber <= 0.0 || ber > 0.5) throw ConfigError("q_from_ber: ber outside (0, 0.5]");
    const double q_lin = std::numbers::sqrt2 * erfc_inv(2.0 * ber);
    if (q_lin <= 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(q_lin);
}

double papr_db(const RealWaveform& w) {
    if (w.samples.empty()) throw ConfigError("papr: empty waveform");
    double peak = 0.0, acc = 0.0;
    for (double v : w.samples) {
        peak = std::max(peak, v * v);
        acc += v * v;
    }
    const double avg = acc / static_cast<double>(w.samples.size());
    if (avg <= 0.0) throw ConfigError("papr: zero-power waveform");
    return 10.0 * std::log10(peak / avg);
}

BerCount ber_count(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits) {
    if (rx_bits.empty() || rx_bits.size() != tx_bits.size())
        throw ConfigError("ber_count: empty input or length mismatch");
    BerCount out;
    out.bits = static_cast<std::int64_t>(rx_bits.size());
    for (std::size_t i = 0; i < rx_bits.size(); ++i)
        if ((rx_bits[i] != 0) != (tx_bits[i] != 0)) ++out.errors;
    out.ber = static_cast<double>(out.errors) / static_cast<double>(out.bits);
    return out;
}

std::vector<double> per_subcarrier_snr_db(std::span<const int> bins,
                                          std::span<const cdouble> rx,
                                          std::span<const cdouble> ref) {
    if (bins.size() != rx.size() || rx.size() != ref.size())
        throw ConfigError("per_subcarrier_snr_db: length mismatch");
    std::map<int, std::pair<double, double>> acc;  // bin -> (signal, error)
    for (std::size_t i = 0; i < rx.size(); ++i) {
        auto& [sig, err] = acc[bins[i]];
        sig += std::norm(ref[i]);
        err += std::norm(rx[i] - ref[i]);
    }
    std::vector<double> out;
    out.reserve(acc.size());
    for (const auto& [bin, se] : acc) {
        const auto& [sig, err] = se;
        out.push_back(err > 0.0 ? 10.0 * std::log10(sig / err)
                                : std::numeric_limits<double>::infinity());
    }
    return out;
}

}  // namespace oofdm
