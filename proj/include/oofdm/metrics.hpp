#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oofdm/waveform.hpp"

namespace oofdm {

struct MetricsRecord {
    double evm_rms = 0.0;
    double ber = 0.0;  // reported, clamped to [0, 0.5]
    bool ber_clamped = false;
    double q_evm_db = 0.0;
    double q_ber_db = 0.0;  // NaN when fewer than 100 errors were counted
    double papr_db = 0.0;
    std::vector<double> per_subcarrier_snr_db;
    std::int64_t bits_counted = 0;
    std::int64_t bit_errors = 0;
};

// RMS error vector magnitude relative to the reference constellation power.
double evm(std::span<const cdouble> rx, std::span<const cdouble> ref);

double q_from_evm(double evm_rms);  // -20 log10(evm)
double q_from_ber(double ber);      // 20 log10(sqrt(2) erfc^-1(2 ber))

double papr_db(const RealWaveform& w);

struct BerCount {
    double ber = 0.0;
    std::int64_t bits = 0;
    std::int64_t errors = 0;
};
BerCount ber_count(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits);

// Inverse complementary error function on (0, 2).
double erfc_inv(double y);

// Per-subcarrier SNR estimate from equalized symbols grouped by bin.
std::vector<double> per_subcarrier_snr_db(std::span<const int> bins,
                                          std::span<const cdouble> rx,
                                          std::span<const cdouble> ref);

}  // namespace oofdm
