#include "oofdm/ofdm.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"

namespace oofdm {

std::vector<int> layer_subcarriers(int layer, int band) {
    if (layer < 1) throw ConfigError("layer index must be >= 1");
    std::vector<int> out;
    const int start = 1 << (layer - 1);  // 2^(l-1)
    const int step = start << 1;         // 2^l
    for (int k = start; k <= band; k += step) out.push_back(k);
    return out;
}

void OfdmConfig::validate() const {
    if (!is_pow2(static_cast<std::size_t>(fft_size)) || fft_size < 4)
        throw ConfigError("fft_size must be a power of two >= 4");
    if (data_band < 1 || data_band > fft_size / 2 - 1)
        throw ConfigError("data_band must be in [1, fft_size/2 - 1]");
    if (cp_len < 0 || cp_len >= fft_size)
        throw ConfigError("cp_len must be in [0, fft_size)");
    if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
    if (format == OfdmFormat::laco) {
        if (layers.empty()) throw ConfigError("LACO config requires at least one layer");
        std::set<int> seen;
        for (const auto& layer : layers) {
            if (layer.layer_index < 1) throw ConfigError("layer index must be >= 1");
            const int div = 1 << (layer.layer_index - 1);
            for (int k : layer.subcarriers) {
                if (k < 1 || k > data_band)
                    throw ConfigError("layer subcarrier " + std::to_string(k) +
                                      " outside [1, band]");
                if (k % div != 0 || (k / div) % 2 != 1)
                    throw ConfigError("subcarrier " + std::to_string(k) +
                                      " does not belong to layer " +
                                      std::to_string(layer.layer_index));
                if (!seen.insert(k).second)
                    throw ConfigError("layer subcarrier sets overlap at " + std::to_string(k));
            }
        }
    } else if (!layers.empty()) {
        throw ConfigError("DCO config must not define layers");
    }
}

int OfdmConfig::data_subcarriers_per_symbol() const {
    if (format == OfdmFormat::dco) return data_band;
    int n = 0;
    for (const auto& l : layers) n += static_cast<int>(l.subcarriers.size());
    return n;
}

OfdmConfig OfdmConfig::dco(int fft_size, int band, double sample_rate, int cp_len) {
    OfdmConfig cfg;
    cfg.fft_size = fft_size;
    cfg.data_band = band;
    cfg.format = OfdmFormat::dco;
    cfg.cp_len = cp_len;
    cfg.sample_rate = sample_rate;
    cfg.validate();
    return cfg;
}

OfdmConfig OfdmConfig::laco(int fft_size, int band, int n_layers, double sample_rate,
                            int cp_len) {
    OfdmConfig cfg;
    cfg.fft_size = fft_size;
    cfg.data_band = band;
    cfg.format = OfdmFormat::laco;
    cfg.cp_len = cp_len;
    cfg.sample_rate = sample_rate;
    for (int l = 1; l <= n_layers; ++l) {
        LayerSpec spec;
        spec.layer_index = l;
        spec.subcarriers = layer_subcarriers(l, band);
        cfg.layers.push_back(std::move(spec));
    }
    cfg.validate();
    return cfg;
}

std::vector<cdouble> hermitian_map(const SymbolFrame& frame, int fft_size) {
    if (frame.indices.size() != frame.symbols.size())
        throw ConfigError("hermitian_map: index/symbol count mismatch");
    std::vector<cdouble> spectrum(static_cast<std::size_t>(fft_size), cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < frame.indices.size(); ++i) {
        const int k = frame.indices[i];
        if (k < 1 || k > fft_size / 2 - 1)
            throw ConfigError("hermitian_map: subcarrier " + std::to_string(k) +
                              " outside [1, N/2 - 1]");
        spectrum[static_cast<std::size_t>(k)] = frame.symbols[i];
        spectrum[static_cast<std::size_t>(fft_size - k)] = std::conj(frame.symbols[i]);
    }
    return spectrum;
}

std::vector<double> clip_negative(std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

RealWaveform clip_negative(const RealWaveform& w) {
    RealWaveform out = w;
    out.samples = clip_negative(std::span<const double>(w.samples));
    return out;
}

RealWaveform add_cp(const RealWaveform& w, int cp_len) {
    if (cp_len < 0 || static_cast<std::size_t>(cp_len) >= w.samples.size())
        throw ConfigError("add_cp: cp_len must be < symbol length");
    RealWaveform out = w;
    if (cp_len == 0) return out;
    out.samples.clear();
    out.samples.reserve(w.samples.size() + static_cast<std::size_t>(cp_len));
    out.samples.insert(out.samples.end(), w.samples.end() - cp_len, w.samples.end());
    out.samples.insert(out.samples.end(), w.samples.begin(), w.samples.end());
    return out;
}

RealWaveform remove_cp(const RealWaveform& w, int cp_len) {
    if (cp_len < 0 || static_cast<std::size_t>(cp_len) >= w.samples.size())
        throw ConfigError("remove_cp: cp_len must be < symbol length");
    RealWaveform out = w;
    if (cp_len == 0) return out;
    out.samples.assign(w.samples.begin() + cp_len, w.samples.end());
    return out;
}

}  // namespace oofdm
