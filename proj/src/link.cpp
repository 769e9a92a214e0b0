#include "oofdm/link.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"
#include "oofdm/rng.hpp"

namespace oofdm {

namespace {

template <typename F>
auto run_stage(const char* stage, F&& fn) {
    try {
        return fn();
    } catch (const DeadSubcarrierError&) {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("[") + stage + "] " + e.what());
    } catch (const SyncError& e) {
        throw SyncError(std::string("[") + stage + "] " + e.what());
    } catch (const DivergenceError& e) {
        throw DivergenceError(std::string("[") + stage + "] " + e.what());
    } catch (const DecodeError& e) {
        throw DecodeError(std::string("[") + stage + "] " + e.what());
    }
}

// Least-squares fit of a*x + b to ref.
std::pair<double, double> affine_fit(std::span<const double> x, std::span<const double> ref) {
    const double mx = mean(x);
    const double mr = mean(ref);
    double sxx = 0.0, sxr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxr += (x[i] - mx) * (ref[i] - mr);
    }
    if (sxx <= 0.0) throw DecodeError("received waveform is flat");
    const double a = sxr / sxx;
    return {a, mr - a * mx};
}

struct TxArtifacts {
    RealWaveform drive_ma;            // preamble + burst, milliamps
    RealWaveform burst_ref_unit;      // burst in the unit-symbol domain
    RealWaveform preamble_ma;
    std::vector<SymbolFrame> frames;  // normalized tx frames, combined ordering
    std::vector<std::uint8_t> payload_bits;
    double papr_db_burst = 0.0;
};

TxArtifacts build_tx(const ExperimentConfig& cfg, const LinkPoint& pt) {
    const OfdmConfig ofdm_cfg = cfg.ofdm(pt.format);
    const FramePlan plan = cfg.frame_plan();
    const TxParams params = cfg.tx_params();
    const int bps = ofdm_cfg.bits_per_symbol();

    Rng train_rng(cfg.training_seed);
    auto bits = train_rng.bits(static_cast<std::size_t>(plan.training_frames) *
                               static_cast<std::size_t>(bps));
    Rng payload_rng(derive_seed(pt.seed, 1));
    const auto payload =
        payload_rng.bits(static_cast<std::size_t>(plan.payload_frames()) *
                         static_cast<std::size_t>(bps));
    bits.insert(bits.end(), payload.begin(), payload.end());

    TxArtifacts tx;
    tx.payload_bits = payload;

    RealWaveform burst_volts;
    double volts_per_unit = 1.0;
    if (pt.format == OfdmFormat::dco) {
        auto built = build_dco_burst(bits, ofdm_cfg, plan, params);
        burst_volts = std::move(built.wave);
        volts_per_unit = built.scale;
    } else {
        // The LACO burst reuses the fitting factor of a reference DCO burst
        // with identical per-subcarrier power.
        const OfdmConfig ref_cfg = cfg.ofdm(OfdmFormat::dco);
        Rng ref_rng(derive_seed(pt.seed, 3));
        const auto ref_bits = ref_rng.bits(static_cast<std::size_t>(plan.n_frames) *
                                           static_cast<std::size_t>(ref_cfg.bits_per_symbol()));
        const double dco_scale = build_dco_burst(ref_bits, ref_cfg, plan, params).scale;
        burst_volts = build_laco_burst(bits, ofdm_cfg, plan, params, dco_scale);
        volts_per_unit = dco_scale;
    }
    tx.papr_db_burst = papr_db(burst_volts);

    tx.frames = frames_from_bits(bits, ofdm_cfg);
    normalize_per_subcarrier(tx.frames);

    // Receiver-side reference in the unit-symbol domain: its per-bin spectra
    // line up with the normalized frames, so the one-tap bank absorbs the
    // whole electro-optic gain.
    tx.burst_ref_unit.sample_rate = ofdm_cfg.sample_rate;
    tx.burst_ref_unit.unit = SignalUnit::normalized;
    tx.burst_ref_unit.samples = burst_volts.samples;
    for (auto& v : tx.burst_ref_unit.samples) v /= volts_per_unit;

    const auto preamble_volts =
        sync_preamble(static_cast<std::size_t>(cfg.preamble_len), ofdm_cfg.sample_rate);
    RealWaveform assembled_volts;
    assembled_volts.sample_rate = ofdm_cfg.sample_rate;
    assembled_volts.unit = SignalUnit::volts;
    assembled_volts.samples = preamble_volts.samples;
    assembled_volts.samples.insert(assembled_volts.samples.end(), burst_volts.samples.begin(),
                                   burst_volts.samples.end());

    tx.drive_ma = to_drive_current(assembled_volts, params);
    tx.preamble_ma = to_drive_current(preamble_volts, params);
    return tx;
}

}  // namespace

LinkOutput run_link(const ExperimentConfig& cfg, const LinkPoint& pt,
                    OpticalField* dump_field_at_rx) {
    cfg.validate();
    const OfdmConfig ofdm_cfg = cfg.ofdm(pt.format);
    const FramePlan plan = cfg.frame_plan();
    const std::size_t sym_len = static_cast<std::size_t>(cfg.fft_size + cfg.cp_len);
    const std::size_t n_train = static_cast<std::size_t>(plan.training_frames) * sym_len;
    const std::size_t n_data = static_cast<std::size_t>(plan.n_frames) * sym_len;

    const TxArtifacts tx = run_stage("tx", [&] { return build_tx(cfg, pt); });

    DmlParams dml = cfg.dml;
    dml.bias_ma = pt.bias_ma;
    const OpticalField launched =
        run_stage("dml", [&] { return dml_modulate(tx.drive_ma, dml); });
    const OpticalField propagated =
        run_stage("fiber", [&] { return fiber_propagate(launched, cfg.fiber); });
    const OpticalField received =
        run_stage("attenuator", [&] { return attenuate_to_rop(propagated, pt.rop_dbm); });
    if (dump_field_at_rx) *dump_field_at_rx = received;

    RxFrontendParams rxfe = cfg.rxfe;
    rxfe.rop_dbm = pt.rop_dbm;
    rxfe.seed = derive_seed(pt.seed, 2);
    const RealWaveform captured =
        run_stage("photodetector", [&] { return photodetect(received, rxfe); });

    // Synchronization: the preamble sits at the burst head; limit the search
    // window so long captures stay cheap.
    const std::size_t offset = run_stage("sync", [&] {
        RealWaveform window;
        window.sample_rate = captured.sample_rate;
        const std::size_t span =
            std::min(captured.samples.size(), tx.preamble_ma.samples.size() + 4096);
        window.samples.assign(captured.samples.begin(),
                              captured.samples.begin() + static_cast<long>(span));
        return synchronize(window, tx.preamble_ma);
    });

    const std::size_t data_start = offset + tx.preamble_ma.samples.size();
    if (captured.samples.size() < data_start + n_data)
        throw DecodeError("[sync] captured waveform too short for the frame plan");

    // Affine gain/offset normalization into the unit-symbol reference
    // domain, fitted on the training region.
    RealWaveform y;
    y.sample_rate = captured.sample_rate;
    y.unit = SignalUnit::milliamps;
    y.samples.assign(captured.samples.begin() + static_cast<long>(data_start),
                     captured.samples.begin() + static_cast<long>(data_start + n_data));
    {
        const auto [a, b] = affine_fit(std::span<const double>(y.samples).subspan(0, n_train),
                                       std::span<const double>(tx.burst_ref_unit.samples)
                                           .subspan(0, n_train));
        for (auto& v : y.samples) v = a * v + b;
    }

    LinkOutput out;
    if (pt.equalizer == EqualizerKind::volterra) {
        auto [weights, report] = run_stage("volterra", [&] {
            return volterra_train(std::span<const double>(y.samples).subspan(0, n_train),
                                  std::span<const double>(tx.burst_ref_unit.samples)
                                      .subspan(0, n_train),
                                  cfg.volterra_taps, cfg.lms_mu1, cfg.lms_mu2, cfg.lms_epochs);
        });
        y.samples = volterra_apply(y.samples, weights);
        out.eq_report = report;
    }

    // One-tap channel estimation on the training frames.
    const std::span<const double> y_train(y.samples.data(), n_train);
    const std::span<const double> y_payload(y.samples.data() + n_train, n_data - n_train);

    OneTapBank bank;
    if (pt.format == OfdmFormat::dco) {
        bank = run_stage("one-tap", [&] {
            std::vector<std::vector<cdouble>> tx_spectra;
            tx_spectra.reserve(static_cast<std::size_t>(plan.training_frames));
            for (int f = 0; f < plan.training_frames; ++f)
                tx_spectra.push_back(
                    hermitian_map(tx.frames[static_cast<std::size_t>(f)], cfg.fft_size));
            std::vector<int> bins;
            for (int k = 1; k <= ofdm_cfg.data_band; ++k) bins.push_back(k);
            return one_tap_estimate(frame_spectra(y_train, ofdm_cfg), tx_spectra, bins);
        });
    } else {
        bank = run_stage("one-tap", [&] {
            return estimate_channel_waveform(
                y_train,
                std::span<const double>(tx.burst_ref_unit.samples).subspan(0, n_train),
                cfg.fft_size, ofdm_cfg.cp_len);
        });
    }

    RealWaveform payload_wave;
    payload_wave.sample_rate = y.sample_rate;
    payload_wave.unit = y.unit;
    payload_wave.samples.assign(y_payload.begin(), y_payload.end());

    const DecodeResult decoded = run_stage("decode", [&] {
        if (pt.format == OfdmFormat::dco) return dco_decode(payload_wave, ofdm_cfg, bank);
        const auto mask = pairwise_mask(cfg.pairwise, ofdm_cfg.layers.size());
        return laco_decode(payload_wave, ofdm_cfg, bank, mask);
    });

    // Reference payload symbols, in the decoder's emission order.
    std::vector<cdouble> ref_symbols;
    ref_symbols.reserve(decoded.symbols.size());
    for (std::size_t f = static_cast<std::size_t>(plan.training_frames); f < tx.frames.size(); ++f)
        ref_symbols.insert(ref_symbols.end(), tx.frames[f].symbols.begin(),
                           tx.frames[f].symbols.end());

    MetricsRecord& m = out.metrics;
    m.evm_rms = evm(decoded.symbols, ref_symbols);
    m.q_evm_db = q_from_evm(m.evm_rms);
    const BerCount bc = ber_count(decoded.bits, tx.payload_bits);
    m.bits_counted = bc.bits;
    m.bit_errors = bc.errors;
    m.ber = bc.ber;
    if (m.ber > 0.5) {
        m.ber = 0.5;
        m.ber_clamped = true;
    }
    m.q_ber_db = bc.errors >= 100 ? q_from_ber(m.ber)
                                  : std::numeric_limits<double>::quiet_NaN();
    m.papr_db = tx.papr_db_burst;
    m.per_subcarrier_snr_db =
        per_subcarrier_snr_db(decoded.symbol_bins, decoded.symbols, ref_symbols);
    return out;
}

namespace {

std::string csv_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct GridPoint {
    double rop_dbm;
    double bias_ma;
};

std::vector<GridPoint> sweep_grid(const ExperimentConfig& cfg) {
    if (cfg.rop_list_dbm.empty())
        throw ConfigError("sweep: sweep.rop_list_dbm must not be empty");
    std::vector<double> biases = cfg.bias_list_ma;
    if (biases.empty()) biases.push_back(cfg.dml.bias_ma);
    std::vector<GridPoint> grid;
    for (double rop : cfg.rop_list_dbm)
        for (double bias : biases) grid.push_back({rop, bias});
    return grid;
}

}  // namespace

std::vector<SweepRow> sweep_rop(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = sweep_grid(cfg);
    std::vector<SweepRow> rows(grid.size());

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = cfg.threads > 0
                                   ? static_cast<unsigned>(cfg.threads)
                                   : std::min<unsigned>(hw, static_cast<unsigned>(grid.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                LinkPoint pt;
                pt.format = cfg.format;
                pt.equalizer = cfg.equalizer;
                pt.rop_dbm = grid[i].rop_dbm;
                pt.seed = derive_seed(cfg.seed, i);
                if (cfg.bias_opt) {
                    const auto opt =
                        optimize_bias(cfg, cfg.format, cfg.equalizer, grid[i].rop_dbm, pt.seed);
                    pt.bias_ma = opt.bias_ma;
                } else {
                    pt.bias_ma = grid[i].bias_ma;
                }
                const auto out = run_link(cfg, pt);
                rows[i] = SweepRow{pt.format,
                                   pt.rop_dbm,
                                   pt.bias_ma,
                                   pt.equalizer,
                                   out.metrics.q_evm_db,
                                   out.metrics.q_ber_db,
                                   out.metrics.ber,
                                   out.metrics.evm_rms,
                                   out.metrics.bits_counted,
                                   pt.seed};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(grid.size());
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                     const std::vector<SweepRow>& rows) {
    out << "# oofdm-sweep-v1\n";
    std::istringstream cfg_lines(cfg.serialize());
    std::string line;
    while (std::getline(cfg_lines, line)) out << "# " << line << "\n";
    out << "format,rop_dbm,bias_ma,equalizer,q_evm_db,q_ber_db,ber,evm,bits,seed\n";
    for (const auto& r : rows) {
        out << to_string(r.format) << ',' << csv_double(r.rop_dbm) << ','
            << csv_double(r.bias_ma) << ',' << to_string(r.equalizer) << ','
            << csv_double(r.q_evm_db) << ',' << csv_double(r.q_ber_db) << ','
            << csv_double(r.ber) << ',' << csv_double(r.evm) << ',' << r.bits << ',' << r.seed
            << "\n";
    }
}

std::string sweep_csv(const ExperimentConfig& cfg) {
    const auto rows = sweep_rop(cfg);
    std::ostringstream ss;
    write_sweep_csv(ss, cfg, rows);
    return ss.str();
}

ExperimentConfig config_from_sweep_csv(std::istream& in) {
    std::string line;
    std::string cfg_text;
    bool banner_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            const std::string body = line.size() > 1 ? line.substr(2) : "";
            if (!banner_seen) {
                if (line.rfind("# oofdm-sweep-v1", 0) != 0)
                    throw ConfigError("replay: not an oofdm sweep CSV");
                banner_seen = true;
                continue;
            }
            cfg_text += body;
            cfg_text += "\n";
            continue;
        }
        break;  // header row reached
    }
    if (!banner_seen) throw ConfigError("replay: missing oofdm-sweep-v1 banner");
    return ExperimentConfig::parse_string(cfg_text);
}

BiasOptResult optimize_bias(const ExperimentConfig& cfg, OfdmFormat format,
                            EqualizerKind equalizer, double rop_dbm, std::uint64_t seed) {
    const double lo = cfg.dml.i_threshold_ma;
    const double hi = cfg.dml.i_threshold_ma + 20.0;
    const double tol = 0.05;

    // A candidate bias that cannot even synchronize or decode is scored as
    // -inf rather than aborting the search; the range deliberately includes
    // infeasible operating points down to the lasing threshold.
    auto evaluate = [&](double bias) {
        LinkPoint pt;
        pt.format = format;
        pt.equalizer = equalizer;
        pt.rop_dbm = rop_dbm;
        pt.bias_ma = bias;
        pt.seed = seed;  // common random numbers across candidate biases
        try {
            return run_link(cfg, pt);
        } catch (const SyncError&) {
        } catch (const DecodeError&) {
        } catch (const DivergenceError&) {
        }
        LinkOutput failed;
        failed.metrics.q_evm_db = -std::numeric_limits<double>::infinity();
        failed.metrics.evm_rms = std::numeric_limits<double>::infinity();
        return failed;
    };

    BiasOptResult best;
    best.metrics.q_evm_db = -std::numeric_limits<double>::infinity();
    auto consider = [&](double bias, const LinkOutput& out) {
        if (out.metrics.q_evm_db > best.metrics.q_evm_db) {
            best.bias_ma = bias;
            best.metrics = out.metrics;
        }
    };

    const auto q_lo = evaluate(lo);
    const auto q_hi = evaluate(hi);
    const double mid = 0.5 * (lo + hi);
    const auto q_mid = evaluate(mid);
    consider(lo, q_lo);
    consider(hi, q_hi);
    consider(mid, q_mid);

    if (q_lo.metrics.q_evm_db > q_mid.metrics.q_evm_db &&
        q_hi.metrics.q_evm_db > q_mid.metrics.q_evm_db) {
        // Not unimodal on this range; fall back to a coarse grid.
        best = BiasOptResult{};
        best.metrics.q_evm_db = -std::numeric_limits<double>::infinity();
        best.grid_fallback = true;
        for (double bias = lo; bias <= hi + 1e-9; bias += 0.2) consider(bias, evaluate(bias));
        return best;
    }

    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    auto o1 = evaluate(x1);
    auto o2 = evaluate(x2);
    consider(x1, o1);
    consider(x2, o2);
    while (b - a > tol) {
        if (o1.metrics.q_evm_db >= o2.metrics.q_evm_db) {
            b = x2;
            x2 = x1;
            o2 = o1;
            x1 = b - phi * (b - a);
            o1 = evaluate(x1);
            consider(x1, o1);
        } else {
            a = x1;
            x1 = x2;
            o1 = o2;
            x2 = a + phi * (b - a);
            o2 = evaluate(x2);
            consider(x2, o2);
        }
    }
    if (!std::isfinite(best.metrics.q_evm_db))
        throw DecodeError("optimize_bias: no feasible bias in the search range");
    return best;
}

const CompareEntry& CompareReport::find(double length_km, OfdmFormat f, EqualizerKind e) const {
    for (const auto& entry : entries)
        if (entry.length_km == length_km && entry.format == f && entry.equalizer == e)
            return entry;
    throw ConfigError("compare report: entry not found");
}

double CompareReport::delta_q_db(double length_km, EqualizerKind e) const {
    return find(length_km, OfdmFormat::laco, e).metrics.q_evm_db -
           find(length_km, OfdmFormat::dco, e).metrics.q_evm_db;
}

CompareReport compare_formats(const ExperimentConfig& cfg, double rop_dbm) {
    cfg.validate();
    CompareReport report;
    report.rop_dbm = rop_dbm;
    const std::vector<double> lengths = cfg.fiber.length_km > 0.0
                                            ? std::vector<double>{0.0, cfg.fiber.length_km}
                                            : std::vector<double>{0.0, 30.0};
    std::size_t idx = 0;
    for (double length : lengths) {
        ExperimentConfig local = cfg;
        local.fiber.length_km = length;
        for (EqualizerKind eq : {EqualizerKind::one_tap, EqualizerKind::volterra}) {
            for (OfdmFormat fmt : {OfdmFormat::dco, OfdmFormat::laco}) {
                const std::uint64_t seed = derive_seed(cfg.seed, 1000 + idx);
                ++idx;
                const auto opt = optimize_bias(local, fmt, eq, rop_dbm, seed);
                report.entries.push_back({length, fmt, eq, opt.bias_ma, opt.metrics});
            }
        }
    }
    return report;
}

void write_compare_report(std::ostream& out, const CompareReport& report) {
    char buf[256];
    out << "format comparison at " << csv_double(report.rop_dbm) << " dBm (bias-optimized)\n";
    out << "length_km  equalizer  format  bias_ma  q_evm_db  q_ber_db  ber\n";
    for (const auto& e : report.entries) {
        std::snprintf(buf, sizeof buf, "%-9g  %-9s  %-6s  %-7.3f  %-8.3f  %-8s  %.3g\n",
                      e.length_km, to_string(e.equalizer), to_string(e.format), e.bias_ma,
                      e.metrics.q_evm_db,
                      std::isnan(e.metrics.q_ber_db)
                          ? "-"
                          : csv_double(e.metrics.q_ber_db).c_str(),
                      e.metrics.ber);
        out << buf;
    }
    std::vector<double> lengths;
    for (const auto& e : report.entries)
        if (lengths.empty() || lengths.back() != e.length_km) lengths.push_back(e.length_km);
    for (const auto eq : {EqualizerKind::one_tap, EqualizerKind::volterra}) {
        for (double length : lengths) {
            std::snprintf(buf, sizeof buf, "delta_q(laco-dco) %s at %g km: %.3f dB\n",
                          to_string(eq), length, report.delta_q_db(length, eq));
            out << buf;
        }
    }
}

std::vector<std::pair<double, double>> power_spectrum(const RealWaveform& w, int nfft) {
    if (!is_pow2(static_cast<std::size_t>(nfft)))
        throw ConfigError("power_spectrum: nfft must be a power of two");
    const std::size_t n = static_cast<std::size_t>(nfft);
    if (w.samples.size() < n) throw ConfigError("power_spectrum: waveform shorter than nfft");
    std::vector<double> acc(n / 2 + 1, 0.0);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= w.samples.size(); start += n) {
        const auto spec = dft(std::span<const double>(w.samples).subspan(start, n));
        for (std::size_t k = 0; k <= n / 2; ++k) acc[k] += std::norm(spec[k]);
        ++segments;
    }
    std::vector<std::pair<double, double>> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const double p = acc[k] / static_cast<double>(segments * n * n);
        out[k] = {static_cast<double>(k) * w.sample_rate / static_cast<double>(n),
                  10.0 * std::log10(std::max(p, 1e-300))};
    }
    return out;
}

std::vector<std::pair<double, double>> power_spectrum(const OpticalField& f, int nfft) {
    if (!is_pow2(static_cast<std::size_t>(nfft)))
        throw ConfigError("power_spectrum: nfft must be a power of two");
    const std::size_t n = static_cast<std::size_t>(nfft);
    if (f.samples.size() < n) throw ConfigError("power_spectrum: field shorter than nfft");
    std::vector<double> acc(n, 0.0);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= f.samples.size(); start += n) {
        const auto spec = dft(std::span<const cdouble>(f.samples).subspan(start, n));
        for (std::size_t k = 0; k < n; ++k) acc[k] += std::norm(spec[k]);
        ++segments;
    }
    // Two-sided, ordered from -fs/2 to +fs/2.
    std::vector<std::pair<double, double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + n / 2) % n;
        const double bin = static_cast<double>(i) - static_cast<double>(n / 2);
        const double p = acc[k] / static_cast<double>(segments * n * n);
        out[i] = {bin * f.sample_rate / static_cast<double>(n),
                  10.0 * std::log10(std::max(p, 1e-300))};
    }
    return out;
}

void write_metrics_text(std::ostream& out, const MetricsRecord& m, const EqualizerReport* eq) {
    out << "evm_rms = " << csv_double(m.evm_rms) << "\n";
    out << "q_evm_db = " << csv_double(m.q_evm_db) << "\n";
    out << "ber = " << csv_double(m.ber) << (m.ber_clamped ? "  # clamped" : "") << "\n";
    out << "q_ber_db = " << (std::isnan(m.q_ber_db) ? "-" : csv_double(m.q_ber_db))
        << (m.bit_errors < 100 ? "  # fewer than 100 errors counted" : "") << "\n";
    out << "papr_db = " << csv_double(m.papr_db) << "\n";
    out << "bits_counted = " << m.bits_counted << "\n";
    out << "bit_errors = " << m.bit_errors << "\n";
    if (eq) {
        out << "volterra_converged = " << (eq->converged ? "true" : "false") << "\n";
        out << "volterra_initial_mse = " << csv_double(eq->initial_mse) << "\n";
        out << "volterra_final_mse = " << csv_double(eq->final_mse) << "\n";
    }
}

void write_equalizer_report(std::ostream& out, const EqualizerReport& report,
                            const VolterraWeights& weights) {
    out << "equalizer = volterra2\n";
    out << "taps_linear = " << weights.taps << "\n";
    out << "taps_quadratic = " << VolterraWeights::quad_size(weights.taps) << "\n";
    out << "mu1 = " << csv_double(weights.mu1) << "\n";
    out << "mu2 = " << csv_double(weights.mu2) << "\n";
    out << "epochs_used = " << report.epochs_used << "\n";
    out << "converged = " << (report.converged ? "true" : "false") << "\n";
    out << "initial_mse = " << csv_double(report.initial_mse) << "\n";
    out << "final_mse = " << csv_double(report.final_mse) << "\n";
    out << "w1 =";
    for (double v : weights.w1) out << ' ' << csv_double(v);
    out << "\nw2 =";
    for (double v : weights.w2) out << ' ' << csv_double(v);
    out << "\n";
}

}  // namespace oofdm
