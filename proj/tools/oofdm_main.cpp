#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "oofdm/errors.hpp"
#include "oofdm/link.hpp"
#include "oofdm/owav.hpp"
#include "oofdm/rng.hpp"

namespace {

using namespace oofdm;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    std::string out_path = "-";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
    cmd->add_option("--config", opts.config_path, "experiment config file (key = value)");
    cmd->add_option("--override", opts.overrides, "config override key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "override run.seed");
    if (with_format) cmd->add_option("--format", opts.format, "dco or laco")
        ->check(CLI::IsMember({"dco", "laco"}));
    cmd->add_option("--out", opts.out_path, "output path ('-' = stdout)");
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = ExperimentConfig::parse_file(opts.config_path);
    for (const auto& ov : opts.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--override expects key=value, got '" + ov + "'");
        cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.format) cfg.set("tx.format", *opts.format);
    cfg.validate();
    return cfg;
}

class OutputSink {
  public:
    explicit OutputSink(const std::string& path) : path_(path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

  private:
    std::string path_;
    std::ofstream file_;
};

LinkPoint point_from_config(const ExperimentConfig& cfg) {
    LinkPoint pt;
    pt.format = cfg.format;
    pt.equalizer = cfg.equalizer;
    pt.rop_dbm = cfg.rxfe.rop_dbm;
    pt.bias_ma = cfg.dml.bias_ma;
    pt.seed = cfg.seed;
    return pt;
}

int cmd_tx_gen(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto pt = point_from_config(cfg);
    // Reuse the run_link transmit path by generating the burst directly.
    const OfdmConfig ofdm_cfg = cfg.ofdm(cfg.format);
    const FramePlan plan = cfg.frame_plan();
    const int bps = ofdm_cfg.bits_per_symbol();
    Rng train_rng(cfg.training_seed);
    auto bits = train_rng.bits(static_cast<std::size_t>(plan.training_frames) * bps);
    Rng payload_rng(derive_seed(pt.seed, 1));
    const auto payload = payload_rng.bits(static_cast<std::size_t>(plan.payload_frames()) * bps);
    bits.insert(bits.end(), payload.begin(), payload.end());

    RealWaveform burst;
    if (cfg.format == OfdmFormat::dco) {
        burst = build_dco_burst(bits, ofdm_cfg, plan, cfg.tx_params()).wave;
    } else {
        const OfdmConfig ref_cfg = cfg.ofdm(OfdmFormat::dco);
        Rng ref_rng(derive_seed(pt.seed, 3));
        const auto ref_bits =
            ref_rng.bits(static_cast<std::size_t>(plan.n_frames) * ref_cfg.bits_per_symbol());
        const double scale = build_dco_burst(ref_bits, ref_cfg, plan, cfg.tx_params()).scale;
        burst = build_laco_burst(bits, ofdm_cfg, plan, cfg.tx_params(), scale);
    }
    auto preamble = sync_preamble(static_cast<std::size_t>(cfg.preamble_len),
                                  ofdm_cfg.sample_rate);
    preamble.samples.insert(preamble.samples.end(), burst.samples.begin(), burst.samples.end());
    const auto drive = to_drive_current(preamble, cfg.tx_params());

    if (opts.out_path == "-") throw ConfigError("tx-gen: --out must be a file path");
    owav_write_file(opts.out_path, drive);
    std::cout << "wrote " << drive.samples.size() << " samples (mA) to " << opts.out_path
              << "\n";
    return 0;
}

int cmd_run_link(const CommonOpts& opts, const std::string& dump_field) {
    const auto cfg = load_config(opts);
    const auto pt = point_from_config(cfg);
    OpticalField field;
    const auto out = run_link(cfg, pt, dump_field.empty() ? nullptr : &field);
    if (!dump_field.empty()) owav_write_file(dump_field, field);
    OutputSink sink(opts.out_path);
    sink.stream() << "format = " << to_string(pt.format) << "\n"
                  << "rop_dbm = " << pt.rop_dbm << "\n"
                  << "bias_ma = " << pt.bias_ma << "\n"
                  << "equalizer = " << to_string(pt.equalizer) << "\n";
    write_metrics_text(sink.stream(), out.metrics,
                       out.eq_report ? &*out.eq_report : nullptr);
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& replay_path) {
    ExperimentConfig cfg;
    if (!replay_path.empty()) {
        std::ifstream in(replay_path);
        if (!in) throw IoError("cannot open " + replay_path);
        cfg = config_from_sweep_csv(in);
        // --seed/--override still apply on top of the embedded config.
        for (const auto& ov : opts.overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--override expects key=value, got '" + ov + "'");
            cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
        }
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.format) cfg.set("tx.format", *opts.format);
        cfg.validate();
    } else {
        cfg = load_config(opts);
    }
    const auto rows = sweep_rop(cfg);
    OutputSink sink(opts.out_path);
    write_sweep_csv(sink.stream(), cfg, rows);
    return 0;
}

int cmd_optimize_bias(const CommonOpts& opts, double rop_dbm) {
    const auto cfg = load_config(opts);
    const auto result = optimize_bias(cfg, cfg.format, cfg.equalizer, rop_dbm, cfg.seed);
    OutputSink sink(opts.out_path);
    if (result.grid_fallback)
        sink.stream() << "# warning: Q(bias) not unimodal, used 0.2 mA grid search\n";
    sink.stream() << "format = " << to_string(cfg.format) << "\n"
                  << "rop_dbm = " << rop_dbm << "\n"
                  << "optimal_bias_ma = " << result.bias_ma << "\n";
    write_metrics_text(sink.stream(), result.metrics);
    return 0;
}

int cmd_compare(const CommonOpts& opts, double rop_dbm) {
    const auto cfg = load_config(opts);
    const auto report = compare_formats(cfg, rop_dbm);
    OutputSink sink(opts.out_path);
    write_compare_report(sink.stream(), report);
    return 0;
}

int cmd_equalize(const CommonOpts& opts, const std::string& in_path,
                 const std::string& ref_path, const std::string& report_path) {
    const auto cfg = load_config(opts);
    auto captured = owav_read_real_file(in_path);
    const auto reference = owav_read_real_file(ref_path);
    const std::size_t n = std::min(captured.samples.size(), reference.samples.size());
    if (n == 0) throw ConfigError("equalize: empty input");
    captured.samples.resize(n);

    std::vector<double> ref(reference.samples.begin(),
                            reference.samples.begin() + static_cast<long>(n));
    const auto [weights, report] =
        volterra_train(captured.samples, ref, cfg.volterra_taps, cfg.lms_mu1, cfg.lms_mu2,
                       cfg.lms_epochs);
    RealWaveform equalized;
    equalized.sample_rate = captured.sample_rate;
    equalized.samples = volterra_apply(captured.samples, weights);

    if (opts.out_path == "-") throw ConfigError("equalize: --out must be a file path");
    owav_write_file(opts.out_path, equalized);
    OutputSink report_sink(report_path.empty() ? "-" : report_path);
    write_equalizer_report(report_sink.stream(), report, weights);
    return 0;
}

int cmd_spectrum(const CommonOpts& opts, const std::string& in_path, int nfft) {
    std::vector<std::pair<double, double>> psd;
    if (owav_peek_kind(in_path) == OwavKind::real)
        psd = power_spectrum(owav_read_real_file(in_path), nfft);
    else
        psd = power_spectrum(owav_read_complex_file(in_path), nfft);
    OutputSink sink(opts.out_path);
    sink.stream() << "freq_hz,power_db\n";
    char buf[64];
    for (const auto& [f, p] : psd) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", f, p);
        sink.stream() << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"software-defined optical-OFDM modem and IM/DD link simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string dump_field, replay_path, in_path, ref_path, report_path;
    double rop_dbm = -10.0;
    int nfft = 1024;

    auto* tx_gen = app.add_subcommand("tx-gen", "generate a drive waveform file");
    add_common(tx_gen, opts);

    auto* run = app.add_subcommand("run-link", "run one link simulation");
    add_common(run, opts);
    run->add_option("--dump-field", dump_field, "write the received optical field (OWAV)");

    auto* sweep = app.add_subcommand("sweep-rop", "ROP/bias sweep, CSV output");
    add_common(sweep, opts);
    sweep->add_option("--replay", replay_path, "regenerate from a sweep CSV's embedded config");

    auto* opt_bias = app.add_subcommand("optimize-bias", "bias search at one ROP");
    add_common(opt_bias, opts);
    opt_bias->add_option("--rop", rop_dbm, "received optical power, dBm");

    auto* compare = app.add_subcommand("compare-formats", "bias-optimized DCO vs LACO table");
    add_common(compare, opts);
    compare->add_option("--rop", rop_dbm, "received optical power, dBm");

    auto* equalize = app.add_subcommand("equalize", "train a Volterra equalizer on OWAV files");
    add_common(equalize, opts, false);
    equalize->add_option("--in", in_path, "captured waveform (OWAV)")->required();
    equalize->add_option("--ref", ref_path, "reference waveform (OWAV)")->required();
    equalize->add_option("--report", report_path, "equalizer report path ('-' = stdout)");

    auto* spectrum = app.add_subcommand("spectrum", "power spectrum of an OWAV file, CSV");
    add_common(spectrum, opts, false);
    spectrum->add_option("--in", in_path, "input waveform (OWAV)")->required();
    spectrum->add_option("--nfft", nfft, "segment size (power of two)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (tx_gen->parsed()) return cmd_tx_gen(opts);
        if (run->parsed()) return cmd_run_link(opts, dump_field);
        if (sweep->parsed()) return cmd_sweep(opts, replay_path);
        if (opt_bias->parsed()) return cmd_optimize_bias(opts, rop_dbm);
        if (compare->parsed()) return cmd_compare(opts, rop_dbm);
        if (equalize->parsed()) return cmd_equalize(opts, in_path, ref_path, report_path);
        if (spectrum->parsed()) return cmd_spectrum(opts, in_path, nfft);
    } catch (const oofdm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
