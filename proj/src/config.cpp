#include "oofdm/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "oofdm/errors.hpp"

namespace oofdm {

const char* to_string(OfdmFormat f) { return f == OfdmFormat::dco ? "dco" : "laco"; }

const char* to_string(EqualizerKind k) {
    return k == EqualizerKind::one_tap ? "one_tap" : "volterra";
}

const char* to_string(PairwiseMode m) {
    switch (m) {
        case PairwiseMode::none: return "none";
        case PairwiseMode::last: return "last";
        default: return "all";
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: bad unsigned value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "tx.format") {
        if (v == "dco") format = OfdmFormat::dco;
        else if (v == "laco") format = OfdmFormat::laco;
        else throw ConfigError("config: tx.format must be dco or laco, got '" + v + "'");
    } else if (key == "tx.fft_size") fft_size = static_cast<int>(parse_int(key, v));
    else if (key == "tx.dco_subcarriers") dco_subcarriers = static_cast<int>(parse_int(key, v));
    else if (key == "tx.laco_band") laco_band = static_cast<int>(parse_int(key, v));
    else if (key == "tx.laco_layers") laco_layers = static_cast<int>(parse_int(key, v));
    else if (key == "tx.cp_len") cp_len = static_cast<int>(parse_int(key, v));
    else if (key == "tx.clip_sigma") clip_sigma = parse_double(key, v);
    else if (key == "tx.drive_pp_ma") drive_pp_ma = parse_double(key, v);
    else if (key == "tx.sample_rate_dco_hz") sample_rate_dco_hz = parse_double(key, v);
    else if (key == "tx.sample_rate_laco_hz") sample_rate_laco_hz = parse_double(key, v);
    else if (key == "tx.n_frames") n_frames = static_cast<int>(parse_int(key, v));
    else if (key == "tx.training_frames") training_frames = static_cast<int>(parse_int(key, v));
    else if (key == "tx.training_seed") training_seed = parse_u64(key, v);
    else if (key == "tx.preamble_len") preamble_len = static_cast<int>(parse_int(key, v));
    else if (key == "dml.threshold_ma") dml.i_threshold_ma = parse_double(key, v);
    else if (key == "dml.slope_w_per_ma") dml.slope_eff_w_per_ma = parse_double(key, v);
    else if (key == "dml.bias_ma") dml.bias_ma = parse_double(key, v);
    else if (key == "dml.bandwidth_3db_hz") dml.bandwidth_3db_hz = parse_double(key, v);
    else if (key == "dml.compression_per_ma") dml.compression_per_ma = parse_double(key, v);
    else if (key == "dml.alpha_chirp") dml.alpha_chirp = parse_double(key, v);
    else if (key == "dml.kappa_hz_per_w") dml.kappa_adiabatic_hz_per_w = parse_double(key, v);
    else if (key == "fiber.length_km") fiber.length_km = parse_double(key, v);
    else if (key == "fiber.dispersion_ps_nm_km") fiber.dispersion_ps_nm_km = parse_double(key, v);
    else if (key == "fiber.wavelength_nm") fiber.wavelength_nm = parse_double(key, v);
    else if (key == "fiber.loss_db_km") fiber.loss_db_km = parse_double(key, v);
    else if (key == "rxfe.rop_dbm") rxfe.rop_dbm = parse_double(key, v);
    else if (key == "rxfe.responsivity_a_w") rxfe.responsivity_a_w = parse_double(key, v);
    else if (key == "rxfe.thermal_noise_rms_a") rxfe.thermal_noise_rms_a = parse_double(key, v);
    else if (key == "rxfe.adc_bits") rxfe.adc_bits = static_cast<int>(parse_int(key, v));
    else if (key == "rx.equalizer") {
        if (v == "one_tap") equalizer = EqualizerKind::one_tap;
        else if (v == "volterra") equalizer = EqualizerKind::volterra;
        else throw ConfigError("config: rx.equalizer must be one_tap or volterra, got '" + v + "'");
    } else if (key == "rx.pairwise") {
        if (v == "none") pairwise = PairwiseMode::none;
        else if (v == "last") pairwise = PairwiseMode::last;
        else if (v == "all") pairwise = PairwiseMode::all;
        else throw ConfigError("config: rx.pairwise must be none, last or all, got '" + v + "'");
    } else if (key == "rx.volterra_taps") volterra_taps = static_cast<int>(parse_int(key, v));
    else if (key == "rx.lms_mu1") lms_mu1 = parse_double(key, v);
    else if (key == "rx.lms_mu2") lms_mu2 = parse_double(key, v);
    else if (key == "rx.lms_epochs") lms_epochs = static_cast<int>(parse_int(key, v));
    else if (key == "sweep.rop_list_dbm") rop_list_dbm = parse_list(key, v);
    else if (key == "sweep.bias_list_ma") bias_list_ma = parse_list(key, v);
    else if (key == "sweep.bias_opt") bias_opt = parse_bool(key, v);
    else if (key == "run.seed") seed = parse_u64(key, v);
    else if (key == "run.threads") threads = static_cast<int>(parse_int(key, v));
    else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::serialize(std::ostream& out) const {
    out << "tx.format = " << to_string(format) << "\n";
    out << "tx.fft_size = " << fft_size << "\n";
    out << "tx.dco_subcarriers = " << dco_subcarriers << "\n";
    out << "tx.laco_band = " << laco_band << "\n";
    out << "tx.laco_layers = " << laco_layers << "\n";
    out << "tx.cp_len = " << cp_len << "\n";
    out << "tx.clip_sigma = " << format_double(clip_sigma) << "\n";
    out << "tx.drive_pp_ma = " << format_double(drive_pp_ma) << "\n";
    out << "tx.sample_rate_dco_hz = " << format_double(sample_rate_dco_hz) << "\n";
    out << "tx.sample_rate_laco_hz = " << format_double(sample_rate_laco_hz) << "\n";
    out << "tx.n_frames = " << n_frames << "\n";
    out << "tx.training_frames = " << training_frames << "\n";
    out << "tx.training_seed = " << training_seed << "\n";
    out << "tx.preamble_len = " << preamble_len << "\n";
    out << "dml.threshold_ma = " << format_double(dml.i_threshold_ma) << "\n";
    out << "dml.slope_w_per_ma = " << format_double(dml.slope_eff_w_per_ma) << "\n";
    out << "dml.bias_ma = " << format_double(dml.bias_ma) << "\n";
    out << "dml.bandwidth_3db_hz = " << format_double(dml.bandwidth_3db_hz) << "\n";
    out << "dml.compression_per_ma = " << format_double(dml.compression_per_ma) << "\n";
    out << "dml.alpha_chirp = " << format_double(dml.alpha_chirp) << "\n";
    out << "dml.kappa_hz_per_w = " << format_double(dml.kappa_adiabatic_hz_per_w) << "\n";
    out << "fiber.length_km = " << format_double(fiber.length_km) << "\n";
    out << "fiber.dispersion_ps_nm_km = " << format_double(fiber.dispersion_ps_nm_km) << "\n";
    out << "fiber.wavelength_nm = " << format_double(fiber.wavelength_nm) << "\n";
    out << "fiber.loss_db_km = " << format_double(fiber.loss_db_km) << "\n";
    out << "rxfe.rop_dbm = " << format_double(rxfe.rop_dbm) << "\n";
    out << "rxfe.responsivity_a_w = " << format_double(rxfe.responsivity_a_w) << "\n";
    out << "rxfe.thermal_noise_rms_a = " << format_double(rxfe.thermal_noise_rms_a) << "\n";
    out << "rxfe.adc_bits = " << rxfe.adc_bits << "\n";
    out << "rx.equalizer = " << to_string(equalizer) << "\n";
    out << "rx.pairwise = " << to_string(pairwise) << "\n";
    out << "rx.volterra_taps = " << volterra_taps << "\n";
    out << "rx.lms_mu1 = " << format_double(lms_mu1) << "\n";
    out << "rx.lms_mu2 = " << format_double(lms_mu2) << "\n";
    out << "rx.lms_epochs = " << lms_epochs << "\n";
    out << "sweep.rop_list_dbm = " << format_list(rop_list_dbm) << "\n";
    out << "sweep.bias_list_ma = " << format_list(bias_list_ma) << "\n";
    out << "sweep.bias_opt = " << (bias_opt ? "true" : "false") << "\n";
    out << "run.seed = " << seed << "\n";
    out << "run.threads = " << threads << "\n";
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream ss;
    serialize(ss);
    return ss.str();
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return parse(in);
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
    std::istringstream ss(text);
    return parse(ss);
}

void ExperimentConfig::validate() const {
    ofdm(OfdmFormat::dco).validate();
    ofdm(OfdmFormat::laco).validate();
    frame_plan().validate();
    dml.validate();
    fiber.validate();
    rxfe.validate();
    if (volterra_taps < 1) throw ConfigError("config: rx.volterra_taps must be >= 1");
    if (lms_epochs < 1) throw ConfigError("config: rx.lms_epochs must be >= 1");
    if (preamble_len < 16) throw ConfigError("config: tx.preamble_len must be >= 16");
    if (training_frames < 1) throw ConfigError("config: tx.training_frames must be >= 1");
}

OfdmConfig ExperimentConfig::ofdm(OfdmFormat f) const {
    if (f == OfdmFormat::dco)
        return OfdmConfig::dco(fft_size, dco_subcarriers, sample_rate_dco_hz, cp_len);
    return OfdmConfig::laco(fft_size, laco_band, laco_layers, sample_rate_laco_hz, cp_len);
}

double ExperimentConfig::spectral_efficiency_ratio() const {
    const auto laco = ofdm(OfdmFormat::laco);
    // DCO occupies its data bins plus the subcarrier slot reserved for DC.
    return static_cast<double>(laco.data_subcarriers_per_symbol()) /
           static_cast<double>(dco_subcarriers + 1);
}

}  // namespace oofdm
