#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oofdm/config.hpp"
#include "oofdm/metrics.hpp"
#include "oofdm/volterra.hpp"

namespace oofdm {

// One grid point of a sweep: everything run_link varies between rows.
struct LinkPoint {
    OfdmFormat format = OfdmFormat::dco;
    double rop_dbm = 0.0;
    double bias_ma = 21.0;
    EqualizerKind equalizer = EqualizerKind::one_tap;
    std::uint64_t seed = 42;
};

struct LinkOutput {
    MetricsRecord metrics;
    std::optional<EqualizerReport> eq_report;  // set when the Volterra stage ran
};

// Full pipeline tx -> laser -> fiber -> attenuator -> photodetector ->
// sync -> [Volterra] -> one-tap decode -> metrics. Deterministic per seed.
LinkOutput run_link(const ExperimentConfig& cfg, const LinkPoint& pt,
                    OpticalField* dump_field_at_rx = nullptr);

struct SweepRow {
    OfdmFormat format;
    double rop_dbm;
    double bias_ma;
    EqualizerKind equalizer;
    double q_evm_db;
    double q_ber_db;  // NaN when too few errors were counted
    double ber;
    double evm;
    std::int64_t bits;
    std::uint64_t seed;
};

// ROP (x bias) sweep; point seeds derive from run.seed by grid index, rows
// appear in grid order. Rerunning the config embedded in the CSV header
// reproduces the output byte for byte.
std::vector<SweepRow> sweep_rop(const ExperimentConfig& cfg);
void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                     const std::vector<SweepRow>& rows);
std::string sweep_csv(const ExperimentConfig& cfg);

// Extracts the config embedded in a sweep CSV header.
ExperimentConfig config_from_sweep_csv(std::istream& in);

struct BiasOptResult {
    double bias_ma = 0.0;
    MetricsRecord metrics;
    bool grid_fallback = false;  // golden-section unimodality check failed
};

// Golden-section search of the EVM-based Q over [threshold, threshold+20 mA],
// 0.05 mA tolerance; falls back to a 0.2 mA grid when the ends beat the
// middle.
BiasOptResult optimize_bias(const ExperimentConfig& cfg, OfdmFormat format,
                            EqualizerKind equalizer, double rop_dbm, std::uint64_t seed);

struct CompareEntry {
    double length_km;
    OfdmFormat format;
    EqualizerKind equalizer;
    double bias_ma;
    MetricsRecord metrics;
};

struct CompareReport {
    double rop_dbm = -10.0;
    std::vector<CompareEntry> entries;

    const CompareEntry& find(double length_km, OfdmFormat f, EqualizerKind e) const;
    double delta_q_db(double length_km, EqualizerKind e) const;  // LACO - DCO
};

// Bias-optimized A/B of both formats, back-to-back and over the configured
// fiber, for both equalizer kinds.
CompareReport compare_formats(const ExperimentConfig& cfg, double rop_dbm);
void write_compare_report(std::ostream& out, const CompareReport& report);

// Averaged-periodogram power spectrum, (frequency Hz, power dB) pairs.
// Real waveforms give the one-sided spectrum; fields the two-sided one.
std::vector<std::pair<double, double>> power_spectrum(const RealWaveform& w, int nfft);
std::vector<std::pair<double, double>> power_spectrum(const OpticalField& f, int nfft);

void write_metrics_text(std::ostream& out, const MetricsRecord& m,
                        const EqualizerReport* eq = nullptr);
void write_equalizer_report(std::ostream& out, const EqualizerReport& report,
                            const VolterraWeights& weights);

}  // namespace oofdm
