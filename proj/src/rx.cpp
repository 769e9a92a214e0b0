#include "oofdm/rx.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"
#include "oofdm/tx.hpp"

namespace oofdm {

std::size_t synchronize(const RealWaveform& rx, const RealWaveform& preamble) {
    const std::size_t n = rx.samples.size();
    const std::size_t m = preamble.samples.size();
    if (m == 0 || n < m) throw SyncError("synchronize: received waveform shorter than preamble");

    const double p_energy = mean_power(std::span<const double>(preamble.samples)) *
                            static_cast<double>(m);
    if (p_energy <= 0.0) throw SyncError("synchronize: preamble has zero energy");

    // Running window energy for the normalized correlation.
    double win_energy = 0.0;
    for (std::size_t i = 0; i < m; ++i) win_energy += rx.samples[i] * rx.samples[i];

    std::vector<double> corr(n - m + 1, 0.0);
    for (std::size_t o = 0; o + m <= n; ++o) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += rx.samples[o + i] * preamble.samples[i];
        const double denom = std::sqrt(std::max(win_energy, 1e-300) * p_energy);
        corr[o] = dot / denom;
        if (o + m < n) {
            win_energy += rx.samples[o + m] * rx.samples[o + m] -
                          rx.samples[o] * rx.samples[o];
        }
    }

    std::size_t best = 0;
    for (std::size_t o = 1; o < corr.size(); ++o)
        if (corr[o] > corr[best]) best = o;

    // Peak-to-sidelobe check, ignoring the peak's immediate neighborhood.
    const std::size_t guard = 16;
    double sidelobe = 0.0;
    bool has_sidelobe = false;
    for (std::size_t o = 0; o < corr.size(); ++o) {
        const std::size_t dist = o > best ? o - best : best - o;
        if (dist <= guard) continue;
        sidelobe = std::max(sidelobe, std::abs(corr[o]));
        has_sidelobe = true;
    }
    if (has_sidelobe && corr[best] < 2.0 * sidelobe)
        throw SyncError("synchronize: peak-to-sidelobe ratio below 2");
    return best;
}

std::vector<std::vector<cdouble>> frame_spectra(std::span<const double> samples,
                                                const OfdmConfig& cfg) {
    const std::size_t sym_len = static_cast<std::size_t>(cfg.fft_size + cfg.cp_len);
    if (sym_len == 0 || samples.size() % sym_len != 0)
        throw ConfigError("frame_spectra: waveform length is not a whole number of symbols");
    const std::size_t n_sym = samples.size() / sym_len;
    std::vector<std::vector<cdouble>> spectra(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) {
        auto sym = samples.subspan(s * sym_len + static_cast<std::size_t>(cfg.cp_len),
                                   static_cast<std::size_t>(cfg.fft_size));
        spectra[s] = dft(sym);
    }
    return spectra;
}

OneTapBank one_tap_estimate(const std::vector<std::vector<cdouble>>& rx_spectra,
                            const std::vector<std::vector<cdouble>>& tx_spectra,
                            std::span<const int> bins) {
    if (rx_spectra.empty() || rx_spectra.size() != tx_spectra.size())
        throw ConfigError("one_tap_estimate: need matching, non-empty training frames");
    const std::size_t n = rx_spectra[0].size();

    OneTapBank bank;
    bank.fft_size = static_cast<int>(n);
    bank.gains.assign(n, cdouble{1.0, 0.0});
    bank.known.assign(n, 0);

    std::vector<int> dead;
    for (int k : bins) {
        const auto ku = static_cast<std::size_t>(k);
        cdouble acc{0.0, 0.0};
        for (std::size_t f = 0; f < rx_spectra.size(); ++f) {
            const cdouble x = tx_spectra[f][ku];
            if (std::abs(x) < 1e-12)
                throw ConfigError("one_tap_estimate: training symbol is zero on bin " +
                                  std::to_string(k));
            acc += rx_spectra[f][ku] / x;
        }
        const cdouble h = acc / static_cast<double>(rx_spectra.size());
        if (std::abs(h) < 1e-12) {
            dead.push_back(k);
            continue;
        }
        bank.gains[ku] = h;
        bank.known[ku] = 1;
        if (2 * ku != n && ku != 0) {
            bank.gains[n - ku] = std::conj(h);
            bank.known[n - ku] = 1;
        }
    }
    if (!dead.empty()) throw DeadSubcarrierError(std::move(dead));
    return bank;
}

OneTapBank estimate_channel_waveform(std::span<const double> rx, std::span<const double> ref,
                                     int fft_size, int cp_len) {
    if (rx.size() != ref.size() || rx.empty())
        throw ConfigError("estimate_channel_waveform: length mismatch");
    OfdmConfig shape;
    shape.fft_size = fft_size;
    shape.data_band = fft_size / 2 - 1;
    shape.cp_len = cp_len;
    const auto rx_spec = frame_spectra(rx, shape);
    const auto ref_spec = frame_spectra(ref, shape);
    const std::size_t n = static_cast<std::size_t>(fft_size);
    const std::size_t half = n / 2;

    OneTapBank bank;
    bank.fft_size = fft_size;
    bank.gains.assign(n, cdouble{1.0, 0.0});
    bank.known.assign(n, 0);

    // Energy-weighted least squares per bin; identical to the ratio average
    // when the reference magnitude is constant across frames.
    std::vector<double> energy(half + 1, 0.0);
    std::vector<cdouble> num(half + 1, cdouble{0.0, 0.0});
    for (std::size_t f = 0; f < ref_spec.size(); ++f)
        for (std::size_t k = 1; k <= half; ++k) {
            num[k] += rx_spec[f][k] * std::conj(ref_spec[f][k]);
            energy[k] += std::norm(ref_spec[f][k]);
        }
    double mean_energy = 0.0;
    for (std::size_t k = 1; k <= half; ++k) mean_energy += energy[k];
    mean_energy /= static_cast<double>(half);
    const double floor = 1e-6 * mean_energy;

    for (std::size_t k = 1; k <= half; ++k) {
        if (energy[k] <= floor) continue;
        bank.gains[k] = num[k] / energy[k];
        bank.known[k] = 1;
    }

    // Fill unobserved bins by linear interpolation between known neighbors.
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= half; ++k) {
        if (!bank.known[k]) continue;
        if (prev == 0) {
            for (std::size_t j = 1; j < k; ++j) bank.gains[j] = bank.gains[k];
        } else if (k > prev + 1) {
            const cdouble a = bank.gains[prev], b = bank.gains[k];
            for (std::size_t j = prev + 1; j < k; ++j) {
                const double t = static_cast<double>(j - prev) / static_cast<double>(k - prev);
                bank.gains[j] = a + (b - a) * t;
            }
        }
        prev = k;
    }
    if (prev != 0)
        for (std::size_t j = prev + 1; j <= half; ++j) bank.gains[j] = bank.gains[prev];

    for (std::size_t k = 1; k < half; ++k) bank.gains[n - k] = std::conj(bank.gains[k]);
    bank.gains[half] = cdouble{bank.gains[half].real(), 0.0};
    return bank;
}

std::vector<std::vector<cdouble>> one_tap_apply(const std::vector<std::vector<cdouble>>& spectra,
                                                const OneTapBank& bank,
                                                std::span<const int> bins) {
    std::vector<std::vector<cdouble>> out = spectra;
    for (auto& spec : out)
        for (int k : bins) spec[static_cast<std::size_t>(k)] /= bank.at(k);
    return out;
}

RealWaveform pairwise_cancel(const RealWaveform& residual, int layer, int fft_size) {
    const std::size_t n = static_cast<std::size_t>(fft_size);
    if (layer < 1) throw ConfigError("pairwise_cancel: layer must be >= 1");
    if (residual.samples.size() % n != 0)
        throw ConfigError("pairwise_cancel: waveform length is not a multiple of fft_size");
    const std::size_t period = n >> layer;  // N / 2^l
    if (period == 0) throw ConfigError("pairwise_cancel: layer too deep for fft_size");

    RealWaveform out = residual;
    for (std::size_t base = 0; base < out.samples.size(); base += n) {
        for (std::size_t k = 0; k < n; ++k) {
            if ((k % (2 * period)) >= period) continue;
            double& a = out.samples[base + k];
            double& b = out.samples[base + k + period];
            if (a < b)
                a = 0.0;
            else
                b = 0.0;
        }
    }
    return out;
}

std::vector<std::uint8_t> pairwise_mask(PairwiseMode mode, std::size_t n_layers) {
    std::vector<std::uint8_t> mask(n_layers, 0);
    if (mode == PairwiseMode::all)
        std::fill(mask.begin(), mask.end(), 1);
    else if (mode == PairwiseMode::last && !mask.empty())
        mask.back() = 1;
    return mask;
}

DecodeResult dco_decode(const RealWaveform& y, const OfdmConfig& cfg, const OneTapBank& bank) {
    cfg.validate();
    if (cfg.format != OfdmFormat::dco) throw ConfigError("dco_decode: format is not DCO");
    const auto spectra = frame_spectra(y.samples, cfg);

    DecodeResult result;
    result.symbols.reserve(spectra.size() * static_cast<std::size_t>(cfg.data_band));
    for (const auto& spec : spectra) {
        for (int k = 1; k <= cfg.data_band; ++k) {
            const cdouble z = spec[static_cast<std::size_t>(k)] / bank.at(k);
            result.symbols.push_back(z);
            result.symbol_bins.push_back(k);
        }
    }
    result.bits = qpsk_demod(result.symbols);
    return result;
}

DecodeResult laco_decode(const RealWaveform& y, const OfdmConfig& cfg, const OneTapBank& bank,
                         std::span<const std::uint8_t> pairwise_enabled) {
    cfg.validate();
    if (cfg.format != OfdmFormat::laco) throw ConfigError("laco_decode: format is not LACO");
    if (!pairwise_enabled.empty() && pairwise_enabled.size() != cfg.layers.size())
        throw ConfigError("laco_decode: pairwise mask size mismatch");

    const std::size_t n = static_cast<std::size_t>(cfg.fft_size);
    const std::size_t sym_len = n + static_cast<std::size_t>(cfg.cp_len);
    if (y.samples.size() % sym_len != 0)
        throw ConfigError("laco_decode: waveform length is not a whole number of symbols");
    const std::size_t n_sym = y.samples.size() / sym_len;

    RealWaveform residual = y;
    double prev_power = mean_power(std::span<const double>(residual.samples));

    DecodeResult result;
    result.layer_symbols.resize(cfg.layers.size());

    // Per (layer, frame) hard decisions, interleaved to frame-major at the end.
    std::vector<std::vector<std::uint8_t>> layer_bits(cfg.layers.size());

    for (std::size_t li = 0; li < cfg.layers.size(); ++li) {
        const auto& layer = cfg.layers[li];
        const bool use_pairwise = !pairwise_enabled.empty() && pairwise_enabled[li] != 0;
        if (use_pairwise) {
            if (cfg.cp_len != 0)
                throw ConfigError("pairwise cancellation requires cp_len = 0");
            residual = pairwise_cancel(residual, layer.layer_index, cfg.fft_size);
        }

        auto spectra = frame_spectra(residual.samples, cfg);
        std::vector<cdouble>& zs = result.layer_symbols[li];
        zs.reserve(n_sym * layer.subcarriers.size());
        std::vector<cdouble> decisions;
        decisions.reserve(n_sym * layer.subcarriers.size());
        for (std::size_t s = 0; s < n_sym; ++s) {
            for (int k : layer.subcarriers) {
                // Clipping halves the layer spectrum; undo it after the one-tap.
                const cdouble z = 2.0 * spectra[s][static_cast<std::size_t>(k)] / bank.at(k);
                zs.push_back(z);
                decisions.push_back(qpsk_slice(z));
            }
        }
        layer_bits[li] = qpsk_demod(decisions);

        // Regenerate the clipped layer from decisions and subtract its
        // channel-shaped contribution (including clipping noise bins).
        for (std::size_t s = 0; s < n_sym; ++s) {
            SymbolFrame frame;
            frame.indices = layer.subcarriers;
            frame.symbols.assign(decisions.begin() + static_cast<long>(s * layer.subcarriers.size()),
                                 decisions.begin() +
                                     static_cast<long>((s + 1) * layer.subcarriers.size()));
            auto clean = idft_real(hermitian_map(frame, cfg.fft_size));
            auto clipped = clip_negative(std::span<const double>(clean));
            auto spec = dft(std::span<const double>(clipped));
            for (std::size_t k = 1; k < n; ++k) spec[k] *= bank.gains[k];
            // DC gain is unity in the gain-normalized receive domain, so the
            // layer's own DC is subtracted unshaped.
            spec[0] = cdouble{0.0, 0.0};
            auto shaped = idft(spec);
            double* dst = residual.samples.data() + s * sym_len + cfg.cp_len;
            const double dc_offset = mean(std::span<const double>(clipped));
            for (std::size_t i = 0; i < n; ++i)
                dst[i] -= shaped[i].real() + dc_offset;
        }

        const double power = mean_power(std::span<const double>(residual.samples));
        if (li + 1 < cfg.layers.size() && power > 10.0 * std::max(prev_power, 1e-30))
            throw DecodeError("laco_decode: residual power grew more than 10x after layer " +
                              std::to_string(layer.layer_index));
        prev_power = power;
    }

    // Interleave to the transmit bit order: frame-major, layers in order.
    for (std::size_t s = 0; s < n_sym; ++s) {
        for (std::size_t li = 0; li < cfg.layers.size(); ++li) {
            const std::size_t per_frame = 2 * cfg.layers[li].subcarriers.size();
            const auto begin = layer_bits[li].begin() + static_cast<long>(s * per_frame);
            result.bits.insert(result.bits.end(), begin, begin + static_cast<long>(per_frame));
            const auto sym_begin =
                result.layer_symbols[li].begin() +
                static_cast<long>(s * cfg.layers[li].subcarriers.size());
            result.symbols.insert(result.symbols.end(), sym_begin,
                                  sym_begin + static_cast<long>(cfg.layers[li].subcarriers.size()));
            result.symbol_bins.insert(result.symbol_bins.end(),
                                      cfg.layers[li].subcarriers.begin(),
                                      cfg.layers[li].subcarriers.end());
        }
    }
    return result;
}

}  // namespace oofdm
