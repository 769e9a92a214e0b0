#include "oofdm/volterra.hpp"

#include <cmath>
#include <string>

#include "oofdm/errors.hpp"
#include "oofdm/waveform.hpp"

namespace oofdm {

VolterraWeights VolterraWeights::identity(int taps) {
    if (taps < 1) throw ConfigError("volterra: taps must be >= 1");
    VolterraWeights w;
    w.taps = taps;
    w.w1.assign(static_cast<std::size_t>(taps), 0.0);
    w.w1[0] = 1.0;
    w.w2.assign(quad_size(taps), 0.0);
    return w;
}

std::vector<double> volterra_apply(std::span<const double> x, const VolterraWeights& w) {
    const int L = w.taps;
    if (w.w1.size() != static_cast<std::size_t>(L) ||
        w.w2.size() != VolterraWeights::quad_size(L))
        throw ConfigError("volterra_apply: weight sizes do not match tap count");

    std::vector<double> y(x.size(), 0.0);
    std::vector<double> hist(static_cast<std::size_t>(L), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        for (int l = L - 1; l > 0; --l) hist[l] = hist[l - 1];
        hist[0] = x[k];
        double acc = 0.0;
        for (int l1 = 0; l1 < L; ++l1) acc += w.w1[l1] * hist[l1];
        std::size_t qi = 0;
        for (int l1 = 0; l1 < L; ++l1)
            for (int l2 = l1; l2 < L; ++l2) acc += w.w2[qi++] * hist[l1] * hist[l2];
        y[k] = acc;
    }
    return y;
}

namespace {

double window_mse(std::span<const double> x, std::span<const double> d,
                  const VolterraWeights& w, std::size_t begin, std::size_t end) {
    // Evaluation with frozen weights over [begin, end); history from x.
    const int L = w.taps;
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        double y = 0.0;
        for (int l1 = 0; l1 < L; ++l1) {
            const double x1 = k >= static_cast<std::size_t>(l1) ? x[k - l1] : 0.0;
            y += w.w1[l1] * x1;
        }
        std::size_t qi = 0;
        for (int l1 = 0; l1 < L; ++l1) {
            const double x1 = k >= static_cast<std::size_t>(l1) ? x[k - l1] : 0.0;
            for (int l2 = l1; l2 < L; ++l2) {
                const double x2 = k >= static_cast<std::size_t>(l2) ? x[k - l2] : 0.0;
                y += w.w2[qi++] * x1 * x2;
            }
        }
        const double e = d[k] - y;
        acc += e * e;
    }
    return acc / static_cast<double>(end - begin);
}

}  // namespace

std::pair<VolterraWeights, EqualizerReport> volterra_train(std::span<const double> x,
                                                           std::span<const double> desired,
                                                           int taps, double mu1, double mu2,
                                                           int epochs) {
    const int L = taps;
    if (L < 1) throw ConfigError("volterra_train: taps must be >= 1");
    if (x.size() != desired.size())
        throw ConfigError("volterra_train: input and desired lengths differ");
    if (x.size() < static_cast<std::size_t>(10 * L))
        throw ConfigError("volterra_train: need at least 10*L samples");
    if (epochs < 1) throw ConfigError("volterra_train: epochs must be >= 1");

    // Shared RMS normalization keeps the step sizes dimensionless and the
    // linear weights directly valid in original units.
    const double scale = rms(x);
    if (scale <= 0.0) throw ConfigError("volterra_train: input waveform is silent");
    const double inv = 1.0 / scale;
    std::vector<double> xn(x.size()), dn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xn[i] = x[i] * inv;
        dn[i] = desired[i] * inv;
    }

    VolterraWeights w = VolterraWeights::identity(L);
    w.mu1 = mu1;
    w.mu2 = mu2;

    const std::size_t n = xn.size();
    const std::size_t win = std::min<std::size_t>(n, 1024);
    // Frozen-weight evaluation over the trailing window, before and after
    // training, so zero step sizes report an exactly constant MSE.
    const double initial_mse = window_mse(xn, dn, w, n - win, n);
    const double div_limit = 1e3 * std::max(initial_mse, 1e-30);

    std::vector<double> hist(static_cast<std::size_t>(L), 0.0);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::fill(hist.begin(), hist.end(), 0.0);
        double block_acc = 0.0;
        std::size_t block_count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            for (int l = L - 1; l > 0; --l) hist[l] = hist[l - 1];
            hist[0] = xn[k];
            double y = 0.0;
            for (int l1 = 0; l1 < L; ++l1) y += w.w1[l1] * hist[l1];
            std::size_t qi = 0;
            for (int l1 = 0; l1 < L; ++l1)
                for (int l2 = l1; l2 < L; ++l2) y += w.w2[qi++] * hist[l1] * hist[l2];

            const double e = dn[k] - y;
            for (int l1 = 0; l1 < L; ++l1) w.w1[l1] += mu1 * e * hist[l1];
            qi = 0;
            for (int l1 = 0; l1 < L; ++l1)
                for (int l2 = l1; l2 < L; ++l2) w.w2[qi++] += mu2 * e * hist[l1] * hist[l2];

            block_acc += e * e;
            block_count += 1;
            if (block_count == win) {
                if (block_acc / static_cast<double>(win) > div_limit)
                    throw DivergenceError("volterra_train: MSE exceeded 1000x initial (step too large)");
                block_acc = 0.0;
                block_count = 0;
            }
        }
    }

    for (double v : w.w1)
        if (!std::isfinite(v)) throw DivergenceError("volterra_train: non-finite linear weights");
    for (double v : w.w2)
        if (!std::isfinite(v)) throw DivergenceError("volterra_train: non-finite quadratic weights");

    EqualizerReport report;
    report.initial_mse = initial_mse;
    report.final_mse = window_mse(xn, dn, w, n - win, n);
    report.epochs_used = epochs;
    report.converged =
        initial_mse < 1e-18 ? true : report.final_mse < 0.5 * initial_mse;

    // De-normalize the quadratic kernel back to original units.
    for (auto& v : w.w2) v *= inv;
    return {w, report};
}

}  // namespace oofdm
