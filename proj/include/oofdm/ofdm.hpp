#pragma once

#include <span>
#include <vector>

#include "oofdm/waveform.hpp"

namespace oofdm {

enum class OfdmFormat { dco, laco };

// One ACO layer (chord): indices 2^(l-1)*(2n+1) within [1, band].
struct LayerSpec {
    int layer_index = 1;
    std::vector<int> subcarriers;

    std::size_t symbols_per_frame() const { return subcarriers.size(); }
};

// Subcarrier indices of layer l within band [1, B], sorted ascending.
std::vector<int> layer_subcarriers(int layer, int band);

struct OfdmConfig {
    int fft_size = 256;
    int data_band = 63;  // usable positive-frequency subcarriers B
    OfdmFormat format = OfdmFormat::dco;
    std::vector<LayerSpec> layers;  // LACO only
    int cp_len = 0;
    double sample_rate = 1.0;  // samples/s

    // Throws ConfigError when any invariant is broken.
    void validate() const;

    // Data subcarriers per OFDM symbol: B for DCO, sum of layer sizes for LACO.
    int data_subcarriers_per_symbol() const;
    int bits_per_symbol() const { return 2 * data_subcarriers_per_symbol(); }  // QPSK
    double bit_rate() const {
        return bits_per_symbol() * sample_rate / static_cast<double>(fft_size + cp_len);
    }

    static OfdmConfig dco(int fft_size, int band, double sample_rate, int cp_len = 0);
    static OfdmConfig laco(int fft_size, int band, int n_layers, double sample_rate,
                           int cp_len = 0);
};

// Complex QPSK symbols of one OFDM symbol, keyed by subcarrier index.
struct SymbolFrame {
    std::vector<int> indices;      // sorted, in [1, N/2 - 1]
    std::vector<cdouble> symbols;  // aligned with indices
};

// Places frame symbols on positive-frequency bins and their conjugates on
// the mirrored bins; bins 0 and N/2 stay zero.
std::vector<cdouble> hermitian_map(const SymbolFrame& frame, int fft_size);

RealWaveform clip_negative(const RealWaveform& w);
std::vector<double> clip_negative(std::span<const double> x);

RealWaveform add_cp(const RealWaveform& w, int cp_len);
RealWaveform remove_cp(const RealWaveform& w, int cp_len);

}  // namespace oofdm
