#pragma once

#include <span>
#include <vector>

namespace oofdm {

// Truncated second-order Volterra kernel: L linear taps plus an upper-
// triangular (l1 <= l2) quadratic kernel of L(L+1)/2 taps.
struct VolterraWeights {
    int taps = 10;
    std::vector<double> w1;  // length L
    std::vector<double> w2;  // length L(L+1)/2, row-major over l1 <= l2
    double mu1 = 1e-3;
    double mu2 = 1e-4;

    static VolterraWeights identity(int taps);
    static std::size_t quad_size(int taps) {
        return static_cast<std::size_t>(taps) * (taps + 1) / 2;
    }
    std::size_t quad_index(int l1, int l2) const {
        return static_cast<std::size_t>(l1) * taps - static_cast<std::size_t>(l1) * (l1 - 1) / 2 +
               static_cast<std::size_t>(l2 - l1);
    }
    double& w2_at(int l1, int l2) { return w2[quad_index(l1, l2)]; }
    double w2_at(int l1, int l2) const { return w2[quad_index(l1, l2)]; }
};

struct EqualizerReport {
    bool converged = false;
    double initial_mse = 0.0;
    double final_mse = 0.0;
    int epochs_used = 0;
};

// y(k) = sum_l1 w1(l1) x(k-l1) + sum_{l1<=l2} w2(l1,l2) x(k-l1) x(k-l2),
// with zero-padded history for the first L-1 outputs.
std::vector<double> volterra_apply(std::span<const double> x, const VolterraWeights& w);

// Sample-by-sample LMS adaptation against a desired waveform. Inputs are
// RMS-normalized internally; returned weights are valid in original units.
std::pair<VolterraWeights, EqualizerReport> volterra_train(std::span<const double> x,
                                                           std::span<const double> desired,
                                                           int taps, double mu1, double mu2,
                                                           int epochs);

}  // namespace oofdm
