#pragma once

#include <iosfwd>
#include <string>

#include "oofdm/waveform.hpp"

namespace oofdm {

// OWAV waveform container: 16-byte header (magic "OWAV", u8 version = 1,
// u8 kind {0 = real, 1 = complex I/Q}, u16 reserved, f64 sample rate,
// little-endian), then f32 little-endian samples, I/Q interleaved for
// complex. Values are stored as f32; unit bookkeeping stays with the caller.
void owav_write(std::ostream& out, const RealWaveform& w);
void owav_write(std::ostream& out, const OpticalField& f);
void owav_write_file(const std::string& path, const RealWaveform& w);
void owav_write_file(const std::string& path, const OpticalField& f);

enum class OwavKind { real = 0, complex_iq = 1 };
OwavKind owav_peek_kind(const std::string& path);

RealWaveform owav_read_real(std::istream& in);
OpticalField owav_read_complex(std::istream& in);
RealWaveform owav_read_real_file(const std::string& path);
OpticalField owav_read_complex_file(const std::string& path);

}  // namespace oofdm
