#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oofdm/ofdm.hpp"
#include "oofdm/waveform.hpp"

namespace oofdm {

// Cross-correlation frame synchronization. Returns the sample offset of the
// preamble start; raises SyncError when the peak-to-sidelobe ratio is < 2.
std::size_t synchronize(const RealWaveform& rx, const RealWaveform& preamble);

// Per-subcarrier complex channel gains. `known[k]` marks bins that were
// actually estimated; the rest are interpolated placeholders.
struct OneTapBank {
    int fft_size = 0;
    std::vector<cdouble> gains;       // size fft_size
    std::vector<std::uint8_t> known;  // size fft_size

    cdouble at(int k) const { return gains[static_cast<std::size_t>(k)]; }
};

// H_est[k] = mean over training frames of Y[k]/X[k] on the given bins.
// Bins whose resulting |H| < 1e-12 raise DeadSubcarrierError.
OneTapBank one_tap_estimate(const std::vector<std::vector<cdouble>>& rx_spectra,
                            const std::vector<std::vector<cdouble>>& tx_spectra,
                            std::span<const int> bins);

// Waveform-level estimate covering every bin the reference has energy on;
// bins without energy are filled by interpolation. Used by the layered
// decoder, whose clipping-noise regeneration needs gains outside the data
// bins as well.
OneTapBank estimate_channel_waveform(std::span<const double> rx, std::span<const double> ref,
                                     int fft_size, int cp_len = 0);

// Equalized spectra: Y[k]/H[k] on the listed bins.
std::vector<std::vector<cdouble>> one_tap_apply(const std::vector<std::vector<cdouble>>& spectra,
                                                const OneTapBank& bank,
                                                std::span<const int> bins);

// Opposite-polarity pairwise noise cancellation for layer `layer`: within
// each OFDM symbol the smaller of each (k, k + N/2^layer) pair is zeroed.
RealWaveform pairwise_cancel(const RealWaveform& residual, int layer, int fft_size);

enum class PairwiseMode { none, last, all };

struct DecodeResult {
    std::vector<std::uint8_t> bits;            // frame-major, layer order within frame
    std::vector<cdouble> symbols;              // pre-decision, same ordering as bits/2
    std::vector<int> symbol_bins;              // subcarrier index per symbol
    std::vector<std::vector<cdouble>> layer_symbols;  // LACO: per layer, frame-major
};

// DCO receiver: DFT framing, one-tap equalization on bins 1..B, slicing.
DecodeResult dco_decode(const RealWaveform& y, const OfdmConfig& cfg, const OneTapBank& bank);

// Iterative layered receiver: per layer, optional pairwise cancellation,
// detection at twice the equalized bin value, hard-decision regeneration of
// the clipped layer and subtraction from the residual.
DecodeResult laco_decode(const RealWaveform& y, const OfdmConfig& cfg, const OneTapBank& bank,
                         std::span<const std::uint8_t> pairwise_enabled);

std::vector<std::uint8_t> pairwise_mask(PairwiseMode mode, std::size_t n_layers);

// Helper shared by decoders and channel estimation: strips the CP of every
// symbol and returns per-symbol spectra.
std::vector<std::vector<cdouble>> frame_spectra(std::span<const double> samples,
                                                const OfdmConfig& cfg);

}  // namespace oofdm
