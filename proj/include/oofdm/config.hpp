#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oofdm/channel.hpp"
#include "oofdm/ofdm.hpp"
#include "oofdm/rx.hpp"
#include "oofdm/tx.hpp"

namespace oofdm {

enum class EqualizerKind { one_tap, volterra };

const char* to_string(OfdmFormat f);
const char* to_string(EqualizerKind k);
const char* to_string(PairwiseMode m);

// Everything a link run or sweep needs, parsed from flat `key = value` text
// with dotted section keys. Unknown keys are hard errors.
struct ExperimentConfig {
    // tx.*
    OfdmFormat format = OfdmFormat::dco;
    int fft_size = 256;
    int dco_subcarriers = 63;  // 64 closes the rate gap with the layered plan
    int laco_band = 64;
    int laco_layers = 3;
    int cp_len = 0;
    double clip_sigma = 4.0;
    double drive_pp_ma = 20.0;
    double sample_rate_dco_hz = 8.75e9;
    double sample_rate_laco_hz = 10e9;
    int n_frames = 440;
    int training_frames = 40;
    std::uint64_t training_seed = 1;
    int preamble_len = 2048;

    // dml.*
    DmlParams dml;

    // fiber.*
    FiberParams fiber;

    // rxfe.*; noise rms calibrated so the bias-optimized link at -10 dBm
    // lands in the working Q range where the format ordering is visible
    RxFrontendParams rxfe{0.0, 0.8, 2e-5, 0, 0};

    // rx.*
    EqualizerKind equalizer = EqualizerKind::one_tap;
    PairwiseMode pairwise = PairwiseMode::last;
    int volterra_taps = 10;
    double lms_mu1 = 1e-3;
    double lms_mu2 = 1e-4;
    int lms_epochs = 20;

    // sweep.*
    std::vector<double> rop_list_dbm;
    std::vector<double> bias_list_ma;
    bool bias_opt = false;

    // run.*
    std::uint64_t seed = 42;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;

    OfdmConfig ofdm(OfdmFormat f) const;
    double sample_rate(OfdmFormat f) const {
        return f == OfdmFormat::dco ? sample_rate_dco_hz : sample_rate_laco_hz;
    }
    TxParams tx_params() const { return {clip_sigma, drive_pp_ma}; }
    FramePlan frame_plan() const { return {n_frames, training_frames}; }

    // LACO data subcarriers over the DCO band (data bins plus the reserved
    // DC slot).
    double spectral_efficiency_ratio() const;

    void set(const std::string& key, const std::string& value);
    void serialize(std::ostream& out) const;
    std::string serialize() const;

    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_string(const std::string& text);
};

}  // namespace oofdm
