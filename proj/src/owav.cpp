#include "oofdm/owav.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "oofdm/errors.hpp"

namespace oofdm {

namespace {

static_assert(std::endian::native == std::endian::little,
              "OWAV I/O assumes a little-endian host");

void put_u16(std::ostream& out, std::uint16_t v) {
    out.write(reinterpret_cast<const char*>(&v), 2);
}

void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
}

void put_f32(std::ostream& out, float v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

void write_header(std::ostream& out, OwavKind kind, double sample_rate) {
    out.write("OWAV", 4);
    const char version = 1;
    const char k = static_cast<char>(kind);
    out.write(&version, 1);
    out.write(&k, 1);
    put_u16(out, 0);
    put_f64(out, sample_rate);
}

struct Header {
    OwavKind kind;
    double sample_rate;
};

Header read_header(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "OWAV", 4) != 0) throw IoError("owav: bad magic");
    char version = 0, kind = 0;
    in.read(&version, 1);
    in.read(&kind, 1);
    char reserved[2];
    in.read(reserved, 2);
    double rate = 0.0;
    in.read(reinterpret_cast<char*>(&rate), 8);
    if (!in) throw IoError("owav: truncated header");
    if (version != 1) throw IoError("owav: unsupported version");
    if (kind != 0 && kind != 1) throw IoError("owav: unknown sample kind");
    return {static_cast<OwavKind>(kind), rate};
}

std::vector<float> read_samples(std::istream& in) {
    std::vector<float> out;
    float v = 0.0f;
    while (in.read(reinterpret_cast<char*>(&v), 4)) {
        if (!std::isfinite(v)) throw IoError("owav: non-finite sample in file");
        out.push_back(v);
    }
    return out;
}

}  // namespace

void owav_write(std::ostream& out, const RealWaveform& w) {
    write_header(out, OwavKind::real, w.sample_rate);
    for (double v : w.samples) put_f32(out, static_cast<float>(v));
    if (!out) throw IoError("owav: write failed");
}

void owav_write(std::ostream& out, const OpticalField& f) {
    write_header(out, OwavKind::complex_iq, f.sample_rate);
    for (const auto& v : f.samples) {
        put_f32(out, static_cast<float>(v.real()));
        put_f32(out, static_cast<float>(v.imag()));
    }
    if (!out) throw IoError("owav: write failed");
}

void owav_write_file(const std::string& path, const RealWaveform& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("owav: cannot open " + path + " for writing");
    owav_write(out, w);
}

void owav_write_file(const std::string& path, const OpticalField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("owav: cannot open " + path + " for writing");
    owav_write(out, f);
}

OwavKind owav_peek_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("owav: cannot open " + path);
    return read_header(in).kind;
}

RealWaveform owav_read_real(std::istream& in) {
    const Header h = read_header(in);
    if (h.kind != OwavKind::real) throw IoError("owav: expected real samples");
    RealWaveform w;
    w.sample_rate = h.sample_rate;
    const auto raw = read_samples(in);
    w.samples.assign(raw.begin(), raw.end());
    return w;
}

OpticalField owav_read_complex(std::istream& in) {
    const Header h = read_header(in);
    if (h.kind != OwavKind::complex_iq) throw IoError("owav: expected complex samples");
    const auto raw = read_samples(in);
    if (raw.size() % 2 != 0) throw IoError("owav: odd I/Q sample count");
    OpticalField f;
    f.sample_rate = h.sample_rate;
    f.samples.resize(raw.size() / 2);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        f.samples[i] = cdouble{raw[2 * i], raw[2 * i + 1]};
    return f;
}

RealWaveform owav_read_real_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("owav: cannot open " + path);
    return owav_read_real(in);
}

OpticalField owav_read_complex_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("owav: cannot open " + path);
    return owav_read_complex(in);
}

}  // namespace oofdm
