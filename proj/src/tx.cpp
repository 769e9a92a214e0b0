#include "oofdm/tx.hpp"

#include <cmath>
#include <map>
#include <string>

#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"
#include "oofdm/rng.hpp"

namespace oofdm {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

void FramePlan::validate() const {
    if (n_frames < 1) throw ConfigError("n_frames must be >= 1");
    if (training_frames < 0 || training_frames >= n_frames)
        throw ConfigError("training_frames must be in [0, n_frames)");
}

std::vector<cdouble> qpsk_mod(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0) throw ConfigError("qpsk_mod: bit count must be even");
    std::vector<cdouble> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int b0 = bits[2 * i] ? 1 : 0;
        const int b1 = bits[2 * i + 1] ? 1 : 0;
        out[i] = cdouble((1 - 2 * b1) * kInvSqrt2, (1 - 2 * b0) * kInvSqrt2);
    }
    return out;
}

std::vector<std::uint8_t> qpsk_demod(std::span<const cdouble> symbols) {
    std::vector<std::uint8_t> bits(symbols.size() * 2);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        bits[2 * i] = symbols[i].imag() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = symbols[i].real() < 0.0 ? 1 : 0;
    }
    return bits;
}

cdouble qpsk_slice(cdouble z) {
    return {z.real() < 0.0 ? -kInvSqrt2 : kInvSqrt2,
            z.imag() < 0.0 ? -kInvSqrt2 : kInvSqrt2};
}

void normalize_per_subcarrier(std::vector<SymbolFrame>& burst) {
    std::map<int, double> power;
    std::map<int, std::size_t> count;
    for (const auto& frame : burst)
        for (std::size_t i = 0; i < frame.indices.size(); ++i) {
            power[frame.indices[i]] += std::norm(frame.symbols[i]);
            count[frame.indices[i]] += 1;
        }
    std::map<int, double> gain;
    for (const auto& [k, p] : power) {
        const double avg = p / static_cast<double>(count[k]);
        if (avg <= 0.0)
            throw ConfigError("normalize_per_subcarrier: subcarrier " + std::to_string(k) +
                              " has zero power");
        gain[k] = 1.0 / std::sqrt(avg);
    }
    for (auto& frame : burst)
        for (std::size_t i = 0; i < frame.indices.size(); ++i)
            frame.symbols[i] *= gain[frame.indices[i]];
}

std::vector<SymbolFrame> frames_from_bits(std::span<const std::uint8_t> bits,
                                          const OfdmConfig& cfg) {
    cfg.validate();
    const int per_frame = cfg.bits_per_symbol();
    if (per_frame == 0 || bits.size() % static_cast<std::size_t>(per_frame) != 0)
        throw ConfigError("frames_from_bits: bit count is not a whole number of frames");
    const std::size_t n_frames = bits.size() / static_cast<std::size_t>(per_frame);

    std::vector<int> indices;
    if (cfg.format == OfdmFormat::dco) {
        for (int k = 1; k <= cfg.data_band; ++k) indices.push_back(k);
    } else {
        for (const auto& layer : cfg.layers)
            indices.insert(indices.end(), layer.subcarriers.begin(), layer.subcarriers.end());
    }

    std::vector<SymbolFrame> frames(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        frames[f].indices = indices;
        frames[f].symbols =
            qpsk_mod(bits.subspan(f * static_cast<std::size_t>(per_frame),
                                  static_cast<std::size_t>(per_frame)));
    }
    return frames;
}

std::vector<std::vector<SymbolFrame>> laco_layer_frames(std::span<const std::uint8_t> bits,
                                                        const OfdmConfig& cfg) {
    if (cfg.format != OfdmFormat::laco) throw ConfigError("laco_layer_frames: format is not LACO");
    const auto combined = frames_from_bits(bits, cfg);
    std::vector<std::vector<SymbolFrame>> per_layer(cfg.layers.size());
    for (std::size_t li = 0; li < cfg.layers.size(); ++li)
        per_layer[li].resize(combined.size());
    for (std::size_t f = 0; f < combined.size(); ++f) {
        std::size_t pos = 0;
        for (std::size_t li = 0; li < cfg.layers.size(); ++li) {
            const auto& subs = cfg.layers[li].subcarriers;
            SymbolFrame& dst = per_layer[li][f];
            dst.indices = subs;
            dst.symbols.assign(combined[f].symbols.begin() + static_cast<long>(pos),
                               combined[f].symbols.begin() + static_cast<long>(pos + subs.size()));
            pos += subs.size();
        }
    }
    return per_layer;
}

namespace {

// IDFT per frame, cyclic prefix, concatenation.
std::vector<double> burst_time_domain(const std::vector<SymbolFrame>& frames,
                                      const OfdmConfig& cfg) {
    std::vector<double> out;
    out.reserve(frames.size() * static_cast<std::size_t>(cfg.fft_size + cfg.cp_len));
    for (const auto& frame : frames) {
        auto wave = idft_real(hermitian_map(frame, cfg.fft_size));
        if (cfg.cp_len > 0)
            out.insert(out.end(), wave.end() - cfg.cp_len, wave.end());
        out.insert(out.end(), wave.begin(), wave.end());
    }
    return out;
}

}  // namespace

DcoBurst build_dco_burst(std::span<const std::uint8_t> bits, const OfdmConfig& cfg,
                         const FramePlan& plan, const TxParams& params) {
    if (cfg.format != OfdmFormat::dco) throw ConfigError("build_dco_burst: format is not DCO");
    plan.validate();
    if (params.clip_sigma <= 0.0) throw ConfigError("clip_sigma must be positive");
    auto frames = frames_from_bits(bits, cfg);
    if (frames.size() != static_cast<std::size_t>(plan.n_frames))
        throw ConfigError("build_dco_burst: bit count does not match frame plan");
    normalize_per_subcarrier(frames);

    DcoBurst burst;
    burst.wave.samples = burst_time_domain(frames, cfg);
    burst.wave.sample_rate = cfg.sample_rate;
    burst.wave.unit = SignalUnit::volts;

    const double sigma = stddev(std::span<const double>(burst.wave.samples));
    if (sigma == 0.0) {
        burst.scale = 1.0;
        return burst;
    }
    const double clip = params.clip_sigma * sigma;
    burst.scale = 0.5 / clip;
    for (auto& v : burst.wave.samples) {
        if (v > clip) v = clip;
        if (v < -clip) v = -clip;
        v *= burst.scale;
    }
    return burst;
}

RealWaveform build_laco_burst(std::span<const std::uint8_t> bits, const OfdmConfig& cfg,
                              const FramePlan& plan, const TxParams& params,
                              double dco_scale) {
    if (cfg.format != OfdmFormat::laco) throw ConfigError("build_laco_burst: format is not LACO");
    plan.validate();
    if (dco_scale <= 0.0) throw ConfigError("build_laco_burst: dco_scale must be positive");
    (void)params;

    auto per_layer = laco_layer_frames(bits, cfg);
    for (auto& frames : per_layer) {
        if (frames.size() != static_cast<std::size_t>(plan.n_frames))
            throw ConfigError("build_laco_burst: bit count does not match frame plan");
        normalize_per_subcarrier(frames);
    }

    const std::size_t sym_len = static_cast<std::size_t>(cfg.fft_size + cfg.cp_len);
    RealWaveform out;
    out.sample_rate = cfg.sample_rate;
    out.unit = SignalUnit::volts;
    out.samples.assign(static_cast<std::size_t>(plan.n_frames) * sym_len, 0.0);
    for (const auto& frames : per_layer) {
        const auto wave = burst_time_domain(frames, cfg);
        const auto clipped = clip_negative(std::span<const double>(wave));
        for (std::size_t i = 0; i < clipped.size(); ++i) out.samples[i] += clipped[i];
    }
    for (auto& v : out.samples) v *= dco_scale;
    return out;
}

RealWaveform sync_preamble(std::size_t length, double sample_rate) {
    RealWaveform w;
    w.sample_rate = sample_rate;
    w.unit = SignalUnit::volts;
    w.samples.resize(length);
    Rng rng(0x0FDA11CEDB151ULL);  // fixed pattern, known to tx and rx
    for (auto& v : w.samples) v = rng.bit() ? 0.35 : -0.35;
    return w;
}

RealWaveform to_drive_current(const RealWaveform& volts, const TxParams& params) {
    RealWaveform out = volts;
    out.unit = SignalUnit::milliamps;
    for (auto& v : out.samples) v *= params.drive_pp_ma;
    return out;
}

}  // namespace oofdm
