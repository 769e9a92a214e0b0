#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oofdm/ofdm.hpp"
#include "oofdm/waveform.hpp"

namespace oofdm {

struct TxParams {
    double clip_sigma = 4.0;    // DCO symmetric clip level, in sample std devs
    double drive_pp_ma = 20.0;  // peak-to-peak drive current for a 1 V p-p waveform
};

struct FramePlan {
    int n_frames = 440;        // OFDM symbols per burst, training included
    int training_frames = 40;  // known symbols prepended for equalizer training

    int payload_frames() const { return n_frames - training_frames; }
    void validate() const;
};

// Gray-mapped unit-power QPSK: 00 -> (1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
// 11 -> (-1-j)/sqrt(2), 10 -> (1-j)/sqrt(2).
std::vector<cdouble> qpsk_mod(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> qpsk_demod(std::span<const cdouble> symbols);
cdouble qpsk_slice(cdouble z);

// Rescales every occupied subcarrier so its average power across the burst
// is exactly 1.
void normalize_per_subcarrier(std::vector<SymbolFrame>& burst);

// Bits -> one SymbolFrame per OFDM symbol. For DCO all of [1, B] is filled;
// for LACO each frame concatenates its layers' bits in layer order.
std::vector<SymbolFrame> frames_from_bits(std::span<const std::uint8_t> bits,
                                          const OfdmConfig& cfg);

// Per-layer frames for one LACO burst: result[layer][frame].
std::vector<std::vector<SymbolFrame>> laco_layer_frames(std::span<const std::uint8_t> bits,
                                                        const OfdmConfig& cfg);

struct DcoBurst {
    RealWaveform wave;   // volts, clipped into [-0.5, +0.5]
    double scale = 1.0;  // volts per normalized-waveform unit
};

// DCO-OFDM: QPSK on bins 1..B, IDFT, symmetric clip at clip_sigma times the
// burst's own sample std, then affine fit of [-c*sigma, +c*sigma] onto
// [-0.5, +0.5] V.
DcoBurst build_dco_burst(std::span<const std::uint8_t> bits, const OfdmConfig& cfg,
                         const FramePlan& plan, const TxParams& params);

// L/E-ACO-OFDM: per layer map, IDFT, clip negatives, superpose, then apply
// the scale factor of a reference DCO burst. Output is non-negative volts.
RealWaveform build_laco_burst(std::span<const std::uint8_t> bits, const OfdmConfig& cfg,
                              const FramePlan& plan, const TxParams& params,
                              double dco_scale);

// Fixed PN preamble used for frame synchronization, +/-0.35 V.
RealWaveform sync_preamble(std::size_t length, double sample_rate);

// Volts -> milliamps using the 1 V p-p == drive_pp mA p-p drive mapping.
RealWaveform to_drive_current(const RealWaveform& volts, const TxParams& params);

}  // namespace oofdm
