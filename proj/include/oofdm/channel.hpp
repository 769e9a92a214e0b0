#pragma once

#include <cstdint>

#include "oofdm/waveform.hpp"

namespace oofdm {

// Behavioral directly-modulated-laser model: first-order drive low-pass,
// threshold clipping, quadratic L-I compression, transient + adiabatic chirp.
struct DmlParams {
    double i_threshold_ma = 12.4;
    double slope_eff_w_per_ma = 1e-4;  // 0.1 W/A
    double bias_ma = 21.0;
    double bandwidth_3db_hz = 8e9;     // 0 disables the low-pass
    double compression_per_ma = 0.02;  // 0 is an ideal linear L-I curve
    double alpha_chirp = 3.0;           // linewidth enhancement factor
    double kappa_adiabatic_hz_per_w = 0.0;

    void validate() const;
};

struct FiberParams {
    double length_km = 0.0;
    double dispersion_ps_nm_km = 17.0;
    double wavelength_nm = 1550.0;
    double loss_db_km = 0.2;

    void validate() const;
};

struct RxFrontendParams {
    double rop_dbm = 0.0;            // target received optical power
    double responsivity_a_w = 0.8;
    double thermal_noise_rms_a = 0.0;  // fixed, ROP-independent
    int adc_bits = 0;                  // 0 = ideal converter
    std::uint64_t seed = 0;

    void validate() const;
};

// Drive current (mA, excursion around bias) -> optical field envelope.
OpticalField dml_modulate(const RealWaveform& drive, const DmlParams& p);

// Chromatic dispersion + attenuation of standard single-mode fiber.
OpticalField fiber_propagate(const OpticalField& field, const FiberParams& f);

// Scales the field so its average power matches the target ROP.
OpticalField attenuate_to_rop(const OpticalField& field, double rop_dbm);

// Square-law detection with additive thermal noise, output in mA.
RealWaveform photodetect(const OpticalField& field, const RxFrontendParams& p);

// First fading notch of a chirp-free IM/DD link, Hz.
double dispersion_notch_hz(const FiberParams& f);

}  // namespace oofdm
