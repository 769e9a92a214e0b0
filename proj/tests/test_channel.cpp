#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oofdm/channel.hpp"
#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"
#include "oofdm/ofdm.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/tx.hpp"
#include "support/lsq.hpp"

using namespace oofdm;

namespace {

DmlParams ideal_laser(double bias_ma) {
    DmlParams p;
    p.bias_ma = bias_ma;
    p.bandwidth_3db_hz = 0.0;
    p.compression_per_ma = 0.0;
    p.alpha_chirp = 0.0;
    p.kappa_adiabatic_hz_per_w = 0.0;
    return p;
}

RealWaveform constant_drive(std::size_t n, double value, double fs) {
    RealWaveform w;
    w.sample_rate = fs;
    w.unit = SignalUnit::milliamps;
    w.samples.assign(n, value);
    return w;
}

double bin_amplitude(std::span<const double> x, std::size_t bin) {
    const auto spec = dft(x);
    return 2.0 * std::abs(spec[bin]) / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("CW drive sits on the static L-I line") {
    const auto field = dml_modulate(constant_drive(512, 0.0, 10e9), ideal_laser(22.4));
    // bias 22.4 mA, threshold 12.4 mA, slope 1e-4 W/mA -> 1 mW
    for (const auto& v : field.samples)
        CHECK(std::norm(v) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("biasing below threshold produces no light") {
    DmlParams p = ideal_laser(10.0);
    RealWaveform drive = constant_drive(256, 0.0, 10e9);
    for (std::size_t i = 0; i < drive.samples.size(); ++i)
        drive.samples[i] = 1.5 * std::sin(2.0 * std::numbers::pi * 0.05 * static_cast<double>(i));
    const auto field = dml_modulate(drive, p);
    for (const auto& v : field.samples) CHECK(std::norm(v) == 0.0);
}

TEST_CASE("sub-threshold swings create a second harmonic") {
    const double fs = 10e9;
    const std::size_t n = 4096;
    const std::size_t tone_bin = 64;
    RealWaveform drive = constant_drive(n, 0.0, fs);
    for (std::size_t i = 0; i < n; ++i)
        drive.samples[i] = 8.0 * std::cos(2.0 * std::numbers::pi *
                                          static_cast<double>(tone_bin * i) /
                                          static_cast<double>(n));

    // Swing stays above threshold: clean tone, no second harmonic.
    const auto clean = dml_modulate(drive, ideal_laser(22.4));  // 22.4 - 8 > 12.4
    std::vector<double> p_clean(n);
    for (std::size_t i = 0; i < n; ++i) p_clean[i] = std::norm(clean.samples[i]);
    const double h1_clean = bin_amplitude(p_clean, tone_bin);
    const double h2_clean = bin_amplitude(p_clean, 2 * tone_bin);
    CHECK(h2_clean < 1e-9 * h1_clean);

    // Swing dips below threshold: clipping generates even-order terms.
    const auto clipped = dml_modulate(drive, ideal_laser(18.0));  // 18 - 8 < 12.4
    std::vector<double> p_clip(n);
    for (std::size_t i = 0; i < n; ++i) p_clip[i] = std::norm(clipped.samples[i]);
    const double h1 = bin_amplitude(p_clip, tone_bin);
    const double h2 = bin_amplitude(p_clip, 2 * tone_bin);
    CHECK(h2 > 0.01 * h1);
}

TEST_CASE("zero-length fiber is the identity") {
    Rng rng(31);
    OpticalField f;
    f.sample_rate = 10e9;
    f.samples.resize(1024);
    for (auto& v : f.samples) v = cdouble{rng.gaussian(), rng.gaussian()};
    FiberParams fiber;
    fiber.length_km = 0.0;
    const auto out = fiber_propagate(f, fiber);
    for (std::size_t i = 0; i < f.samples.size(); ++i) CHECK(out.samples[i] == f.samples[i]);
}

TEST_CASE("lossless fiber conserves energy") {
    Rng rng(32);
    OpticalField f;
    f.sample_rate = 10e9;
    f.samples.resize(4096);  // power of two: no padding loss
    for (auto& v : f.samples) v = cdouble{rng.gaussian(), rng.gaussian()};
    FiberParams fiber;
    fiber.length_km = 50.0;
    fiber.loss_db_km = 0.0;
    const auto out = fiber_propagate(f, fiber);
    const double e_in = mean_power(std::span<const cdouble>(f.samples));
    const double e_out = mean_power(std::span<const cdouble>(out.samples));
    CHECK(e_out == doctest::Approx(e_in).epsilon(1e-9));
}

TEST_CASE("dispersion power fading follows the closed-form small-signal law") {
    const double fs = 50e9;
    const std::size_t n = 8192;
    FiberParams fiber;
    fiber.length_km = 100.0;
    fiber.loss_db_km = 0.0;
    const double notch = dispersion_notch_hz(fiber);
    CHECK(notch == doctest::Approx(6.058e9).epsilon(0.01));

    const double m = 0.05;
    auto measure = [&](std::size_t bin) {
        OpticalField f;
        f.sample_rate = fs;
        f.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = 1e-3 * (1.0 + m * std::cos(2.0 * std::numbers::pi *
                                                        static_cast<double>(bin * i) /
                                                        static_cast<double>(n)));
            f.samples[i] = std::sqrt(p);
        }
        const auto out = fiber_propagate(f, fiber);
        RxFrontendParams fe;
        fe.thermal_noise_rms_a = 0.0;
        const auto current = photodetect(out, fe);
        return bin_amplitude(current.samples, bin);
    };

    const double lambda_m = fiber.wavelength_nm * 1e-9;
    const double d_si = fiber.dispersion_ps_nm_km * 1e-6;
    const double length_m = fiber.length_km * 1e3;
    const std::size_t notch_bin =
        static_cast<std::size_t>(std::round(notch * static_cast<double>(n) / fs));

    const double ref = measure(64);  // low frequency, essentially no fading
    for (std::size_t bin : {std::size_t{100}, std::size_t{300}, std::size_t{500},
                            std::size_t{700}, std::size_t{900}, notch_bin}) {
        const double f_hz = static_cast<double>(bin) * fs / static_cast<double>(n);
        const double predicted = std::abs(
            std::cos(std::numbers::pi * d_si * length_m * lambda_m * lambda_m * f_hz * f_hz /
                     299792458.0));
        const double measured = measure(bin) / ref;
        CHECK(measured == doctest::Approx(predicted).epsilon(0.05).scale(1.0));
    }
    CHECK(measure(notch_bin) / ref < 0.02);  // deep null at the predicted notch
}

TEST_CASE("attenuator pins the average power to the target ROP") {
    Rng rng(33);
    OpticalField f;
    f.sample_rate = 10e9;
    f.samples.resize(2048);
    for (auto& v : f.samples) v = cdouble{0.02 + 0.002 * rng.gaussian(), 0.0};

    const auto at0 = attenuate_to_rop(f, 0.0);
    CHECK(mean_power(std::span<const cdouble>(at0.samples)) ==
          doctest::Approx(1e-3).epsilon(1e-6));

    const auto at10 = attenuate_to_rop(f, -10.0);
    CHECK(mean_power(std::span<const cdouble>(at10.samples)) ==
          doctest::Approx(1e-4).epsilon(1e-6));

    const auto twice = attenuate_to_rop(at10, -10.0);
    for (std::size_t i = 0; i < twice.samples.size(); ++i)
        CHECK(std::abs(twice.samples[i] - at10.samples[i]) < 1e-12);

    OpticalField dark;
    dark.samples.assign(16, cdouble{0.0, 0.0});
    CHECK_THROWS_AS(attenuate_to_rop(dark, 0.0), ConfigError);
}

TEST_CASE("photodetection is square-law and seed-deterministic") {
    OpticalField f;
    f.sample_rate = 10e9;
    f.samples.assign(256, cdouble{0.03, 0.0});  // 0.9 mW

    RxFrontendParams quiet;
    quiet.thermal_noise_rms_a = 0.0;
    const auto clean = photodetect(f, quiet);
    for (double v : clean.samples)
        CHECK(v == doctest::Approx(1e3 * 0.8 * 9e-4).epsilon(1e-12));

    RxFrontendParams noisy;
    noisy.thermal_noise_rms_a = 1e-5;
    noisy.seed = 77;
    const auto a = photodetect(f, noisy);
    const auto b = photodetect(f, noisy);
    CHECK(a.samples == b.samples);

    noisy.seed = 78;
    const auto c = photodetect(f, noisy);
    CHECK(a.samples != c.samples);
}

TEST_CASE("electrical SNR drops 2 dB per 1 dB of ROP in the thermal limit") {
    const double fs = 10e9;
    const std::size_t n = 16384;
    const std::size_t tone_bin = 512;
    OpticalField f;
    f.sample_rate = fs;
    f.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = 1e-3 * (1.0 + 0.4 * std::cos(2.0 * std::numbers::pi *
                                                      static_cast<double>(tone_bin * i) /
                                                      static_cast<double>(n)));
        f.samples[i] = std::sqrt(p);
    }

    std::vector<double> rop_db, snr_db;
    for (int rop = 0; rop >= -6; --rop) {
        const auto at = attenuate_to_rop(f, static_cast<double>(rop));
        RxFrontendParams fe;
        fe.thermal_noise_rms_a = 2e-6;
        fe.seed = 99;
        const auto current = photodetect(at, fe);
        const auto spec = dft(std::span<const double>(current.samples));
        const double sig = std::norm(spec[tone_bin]);
        double noise = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 1000; k < 5000; ++k) {
            if (k == tone_bin || k == 2 * tone_bin || k == 3 * tone_bin) continue;
            noise += std::norm(spec[k]);
            ++count;
        }
        noise /= static_cast<double>(count);
        rop_db.push_back(static_cast<double>(rop));
        snr_db.push_back(10.0 * std::log10(sig / noise));
    }

    // Least-squares slope of SNR(dB) vs ROP(dB).
    const double mx = mean(rop_db), my = mean(snr_db);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < rop_db.size(); ++i) {
        sxx += (rop_db[i] - mx) * (rop_db[i] - mx);
        sxy += (rop_db[i] - mx) * (snr_db[i] - my);
    }
    const double slope = sxy / sxx;
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("ideal settings leave the link affine end to end") {
    Rng rng(34);
    const double fs = 10e9;
    RealWaveform drive = constant_drive(8192, 0.0, fs);
    for (auto& v : drive.samples) v = 5.0 * rng.gaussian();
    for (auto& v : drive.samples) v = std::clamp(v, -10.0, 10.0);

    const auto field = dml_modulate(drive, ideal_laser(30.0));  // never clips
    FiberParams fiber;
    fiber.length_km = 0.0;
    const auto out = fiber_propagate(field, fiber);
    RxFrontendParams fe;
    fe.thermal_noise_rms_a = 0.0;
    const auto current = photodetect(out, fe);

    // Best-fit affine map drive -> current, residual below 1e-9 of rms.
    const double mx = mean(std::span<const double>(drive.samples));
    const double my = mean(std::span<const double>(current.samples));
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < drive.samples.size(); ++i) {
        sxx += (drive.samples[i] - mx) * (drive.samples[i] - mx);
        sxy += (drive.samples[i] - mx) * (current.samples[i] - my);
    }
    const double a = sxy / sxx;
    const double b = my - a * mx;
    double max_err = 0.0;
    for (std::size_t i = 0; i < drive.samples.size(); ++i)
        max_err = std::max(max_err, std::abs(a * drive.samples[i] + b - current.samples[i]));
    CHECK(max_err < 1e-9 * rms(std::span<const double>(current.samples)));
}

TEST_CASE("chirp plus dispersion defeats a purely linear fit") {
    // Premise of the second-order equalizer: on the distorted channel a
    // linear FIR least-squares fit leaves strictly more residual than the
    // Volterra fit on the same data.
    Rng rng(35);
    const auto cfg = OfdmConfig::dco(256, 63, 10e9);
    const int n_frames = 32;
    const auto bits = rng.bits(static_cast<std::size_t>(cfg.bits_per_symbol()) * n_frames);
    const auto burst = build_dco_burst(bits, cfg, FramePlan{n_frames, 1}, TxParams{});
    const auto drive = to_drive_current(burst.wave, TxParams{});

    DmlParams dml;
    dml.bias_ma = 17.0;  // drive swings below threshold
    const auto field = dml_modulate(drive, dml);
    FiberParams fiber;
    fiber.length_km = 30.0;
    const auto out = fiber_propagate(field, fiber);
    RxFrontendParams fe;
    fe.thermal_noise_rms_a = 0.0;
    const auto current = photodetect(attenuate_to_rop(out, 0.0), fe);

    std::vector<double> x(current.samples.size()), d(drive.samples.size());
    const double mx = mean(std::span<const double>(current.samples));
    const double md = mean(std::span<const double>(drive.samples));
    const double sx = rms(std::span<const double>(current.samples));
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = (current.samples[i] - mx) / sx;
        d[i] = (drive.samples[i] - md) / sx;
    }

    const int L = 10;
    const auto phi = lsq::volterra_regressors(x, L);
    std::vector<std::vector<double>> phi_lin(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k)
        phi_lin[k].assign(phi[k].begin(), phi[k].begin() + L);

    const auto w_lin = lsq::solve(phi_lin, d);
    const auto w_full = lsq::solve(phi, d);
    const double r_lin = lsq::fit_residual_rms(phi_lin, d, w_lin);
    const double r_full = lsq::fit_residual_rms(phi, d, w_full);
    CHECK(r_lin > 0.0);
    CHECK(r_full < 0.97 * r_lin);
}
