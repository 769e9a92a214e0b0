#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oofdm {

// Configuration / contract violations. CLI maps these to exit code 2.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Runtime failures (exit code 3).
struct SyncError : std::runtime_error {
    explicit SyncError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& msg) : std::runtime_error(msg) {}
};

// One-tap equalizer found bins with no usable channel gain.
struct DeadSubcarrierError : DecodeError {
    std::vector<int> bins;
    explicit DeadSubcarrierError(std::vector<int> k)
        : DecodeError(format_msg(k)), bins(std::move(k)) {}

  private:
    static std::string format_msg(const std::vector<int>& k) {
        std::string s = "dead subcarriers:";
        for (int b : k) s += " " + std::to_string(b);
        return s;
    }
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace oofdm
