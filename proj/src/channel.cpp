#include "oofdm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oofdm/errors.hpp"
#include "oofdm/fft.hpp"
#include "oofdm/rng.hpp"

namespace oofdm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLightSpeed = 299792458.0;  // m/s
}  // namespace

void DmlParams::validate() const {
    if (i_threshold_ma <= 0) throw ConfigError("dml: threshold must be positive");
    if (slope_eff_w_per_ma <= 0) throw ConfigError("dml: slope efficiency must be positive");
    if (bias_ma < 0) throw ConfigError("dml: bias must be non-negative");
    if (bandwidth_3db_hz < 0) throw ConfigError("dml: bandwidth must be non-negative");
}

void FiberParams::validate() const {
    if (length_km < 0) throw ConfigError("fiber: length must be non-negative");
    if (wavelength_nm <= 0) throw ConfigError("fiber: wavelength must be positive");
}

void RxFrontendParams::validate() const {
    if (responsivity_a_w <= 0) throw ConfigError("rx frontend: responsivity must be positive");
    if (thermal_noise_rms_a < 0) throw ConfigError("rx frontend: noise rms must be non-negative");
    if (adc_bits < 0 || adc_bits > 24) throw ConfigError("rx frontend: adc_bits out of range");
}

OpticalField dml_modulate(const RealWaveform& drive, const DmlParams& p) {
    p.validate();
    const std::size_t n = drive.samples.size();
    OpticalField field;
    field.sample_rate = drive.sample_rate;
    field.samples.resize(n);
    if (n == 0) return field;

    // First-order low-pass on the drive excursion; laser rests at bias.
    std::vector<double> current(n);
    if (p.bandwidth_3db_hz > 0.0) {
        const double a = 1.0 - std::exp(-kTwoPi * p.bandwidth_3db_hz / drive.sample_rate);
        double state = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            state += a * (drive.samples[i] - state);
            current[i] = p.bias_ma + state;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) current[i] = p.bias_ma + drive.samples[i];
    }

    const double dt = 1.0 / drive.sample_rate;
    double phase = 0.0;
    double prev_power = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = std::max(current[i] - p.i_threshold_ma, 0.0);
        double power = p.slope_eff_w_per_ma * di * (1.0 - p.compression_per_ma * di);
        if (power < 0.0) power = 0.0;

        if (i > 0) {
            double dphi = 0.0;
            if (p.alpha_chirp != 0.0 && power > 0.0 && prev_power > 0.0)
                dphi += 0.5 * p.alpha_chirp * (std::log(power) - std::log(prev_power));
            if (p.kappa_adiabatic_hz_per_w != 0.0)
                dphi += kTwoPi * p.kappa_adiabatic_hz_per_w * power * dt;
            phase += dphi;
        }
        field.samples[i] = std::polar(std::sqrt(power), phase);
        prev_power = power;
    }
    return field;
}

OpticalField fiber_propagate(const OpticalField& field, const FiberParams& f) {
    f.validate();
    if (f.length_km == 0.0) return field;
    const std::size_t n = field.samples.size();
    if (n == 0) return field;

    std::size_t padded = 1;
    while (padded < n) padded <<= 1;
    std::vector<cdouble> spec(field.samples.begin(), field.samples.end());
    spec.resize(padded, cdouble{0.0, 0.0});
    fft_inplace(spec, false);

    const double lambda_m = f.wavelength_nm * 1e-9;
    const double d_si = f.dispersion_ps_nm_km * 1e-6;  // s/m^2
    const double beta2 = -d_si * lambda_m * lambda_m / (kTwoPi * kLightSpeed);
    const double length_m = f.length_km * 1e3;
    const double amp = std::pow(10.0, -f.loss_db_km * f.length_km / 20.0);

    for (std::size_t k = 0; k < padded; ++k) {
        const double bin = k < padded / 2 ? static_cast<double>(k)
                                          : static_cast<double>(k) - static_cast<double>(padded);
        const double omega = kTwoPi * bin * field.sample_rate / static_cast<double>(padded);
        const double arg = 0.5 * beta2 * omega * omega * length_m;
        spec[k] *= amp * cdouble{std::cos(arg), std::sin(arg)};
    }

    fft_inplace(spec, true);
    OpticalField out;
    out.sample_rate = field.sample_rate;
    out.samples.assign(spec.begin(), spec.begin() + static_cast<long>(n));
    return out;
}

OpticalField attenuate_to_rop(const OpticalField& field, double rop_dbm) {
    const double p_avg = mean_power(std::span<const cdouble>(field.samples));
    if (p_avg <= 0.0) throw ConfigError("attenuate_to_rop: field has zero average power");
    const double target_w = std::pow(10.0, (rop_dbm - 30.0) / 10.0);
    const double gain = std::sqrt(target_w / p_avg);
    OpticalField out = field;
    for (auto& v : out.samples) v *= gain;
    return out;
}

RealWaveform photodetect(const OpticalField& field, const RxFrontendParams& p) {
    p.validate();
    RealWaveform out;
    out.sample_rate = field.sample_rate;
    out.unit = SignalUnit::milliamps;
    out.samples.resize(field.samples.size());

    Rng rng(p.seed);
    for (std::size_t i = 0; i < field.samples.size(); ++i) {
        double i_a = p.responsivity_a_w * std::norm(field.samples[i]);
        if (p.thermal_noise_rms_a > 0.0) i_a += p.thermal_noise_rms_a * rng.gaussian();
        out.samples[i] = 1e3 * i_a;
    }

    if (p.adc_bits > 0 && !out.samples.empty()) {
        const auto [mn, mx] = std::minmax_element(out.samples.begin(), out.samples.end());
        const double lo = *mn;
        const double span = *mx - lo;
        if (span > 0.0) {
            const double levels = static_cast<double>((1u << p.adc_bits) - 1u);
            const double step = span / levels;
            for (auto& v : out.samples) v = lo + std::round((v - lo) / step) * step;
        }
    }
    return out;
}

double dispersion_notch_hz(const FiberParams& f) {
    const double lambda_m = f.wavelength_nm * 1e-9;
    const double d_si = f.dispersion_ps_nm_km * 1e-6;
    const double length_m = f.length_km * 1e3;
    return std::sqrt(kLightSpeed / (2.0 * d_si * length_m * lambda_m * lambda_m));
}

}  // namespace oofdm
