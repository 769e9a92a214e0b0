#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oofdm/errors.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/volterra.hpp"
#include "support/lsq.hpp"

using namespace oofdm;

TEST_CASE("kernel sizes for L=10 are 10 and 55") {
    const auto w = VolterraWeights::identity(10);
    CHECK(w.w1.size() == 10);
    CHECK(w.w2.size() == 55);
    CHECK(VolterraWeights::quad_size(10) == 55);
}

TEST_CASE("identity weights pass the signal through bit-for-bit") {
    Rng rng(41);
    std::vector<double> x(500);
    for (auto& v : x) v = rng.gaussian();
    const auto y = volterra_apply(x, VolterraWeights::identity(10));
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("a lone (0,0) quadratic tap squares the input") {
    Rng rng(42);
    std::vector<double> x(200);
    for (auto& v : x) v = rng.gaussian();
    VolterraWeights w = VolterraWeights::identity(4);
    w.w1[0] = 0.0;
    w.w2_at(0, 0) = 1.0;
    const auto y = volterra_apply(x, w);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(y[i] == doctest::Approx(x[i] * x[i]).epsilon(1e-15));
}

TEST_CASE("linear part obeys superposition; quadratic part scales as a^2") {
    Rng rng(43);
    std::vector<double> a(300), b(300);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = rng.gaussian();

    VolterraWeights lin = VolterraWeights::identity(8);
    for (int l = 0; l < 8; ++l) lin.w1[l] = 0.5 / (1.0 + l);
    std::vector<double> sum(300);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
    const auto ya = volterra_apply(a, lin);
    const auto yb = volterra_apply(b, lin);
    const auto ys = volterra_apply(sum, lin);
    for (std::size_t i = 0; i < sum.size(); ++i)
        CHECK(ys[i] == doctest::Approx(ya[i] + yb[i]).epsilon(1e-9));

    VolterraWeights quad = VolterraWeights::identity(8);
    quad.w1[0] = 0.0;
    for (auto& v : quad.w2) v = 0.1;
    std::vector<double> scaled(300);
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = 3.0 * a[i];
    const auto q1 = volterra_apply(a, quad);
    const auto q3 = volterra_apply(scaled, quad);
    for (std::size_t i = 0; i < scaled.size(); ++i)
        CHECK(q3[i] == doctest::Approx(9.0 * q1[i]).epsilon(1e-9));
}

TEST_CASE("training on an identity channel recovers a delta") {
    Rng rng(44);
    std::vector<double> x(4000);
    for (auto& v : x) v = rng.gaussian();
    const auto [w, report] = volterra_train(x, x, 10, 1e-3, 1e-4, 10);
    CHECK(std::abs(w.w1[0] - 1.0) < 0.05);
    for (int l = 1; l < 10; ++l) CHECK(std::abs(w.w1[l]) < 0.05);
    for (double v : w.w2) CHECK(std::abs(v) < 0.05);
    CHECK(report.converged);  // desired == x counts as converged by definition
}

TEST_CASE("LMS recovery matches the closed-form least-squares oracle") {
    // d(k) = 0.9 x(k) + 0.3 x(k-1) + 0.1 x(k)^2 on white input.
    Rng rng(45);
    std::vector<double> x(10000), d(10000);
    for (auto& v : x) v = rng.gaussian();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double x1 = k >= 1 ? x[k - 1] : 0.0;
        d[k] = 0.9 * x[k] + 0.3 * x1 + 0.1 * x[k] * x[k];
    }

    const int L = 10;
    const auto [w, report] = volterra_train(x, d, L, 1e-3, 1e-3, 50);
    CHECK(report.converged);

    const auto phi = lsq::volterra_regressors(x, L);
    const auto w_ls = lsq::solve(phi, d);

    for (int l = 0; l < L; ++l) CHECK(std::abs(w.w1[l] - w_ls[static_cast<std::size_t>(l)]) < 0.02);
    for (std::size_t q = 0; q < w.w2.size(); ++q)
        CHECK(std::abs(w.w2[q] - w_ls[static_cast<std::size_t>(L) + q]) < 0.02);

    // And the oracle itself should sit on the true coefficients here.
    CHECK(w_ls[0] == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(w_ls[1] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(w_ls[static_cast<std::size_t>(L)] == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("zero step sizes leave the weights untouched") {
    Rng rng(46);
    std::vector<double> x(2000), d(2000);
    for (auto& v : x) v = rng.gaussian();
    for (std::size_t k = 0; k < x.size(); ++k) d[k] = 0.5 * x[k];
    const auto [w, report] = volterra_train(x, d, 6, 0.0, 0.0, 5);
    CHECK(w.w1[0] == 1.0);
    for (int l = 1; l < 6; ++l) CHECK(w.w1[l] == 0.0);
    for (double v : w.w2) CHECK(v == 0.0);
    CHECK(report.final_mse == doctest::Approx(report.initial_mse).epsilon(1e-9));
}

TEST_CASE("an oversized step diverges with an error") {
    Rng rng(47);
    std::vector<double> x(4000), d(4000);
    for (auto& v : x) v = rng.gaussian();
    for (std::size_t k = 0; k < x.size(); ++k) d[k] = 2.0 * x[k];
    CHECK_THROWS_AS(volterra_train(x, d, 10, 0.8, 0.8, 50), DivergenceError);
}

TEST_CASE("contract violations are reported") {
    std::vector<double> x(50, 1.0);
    CHECK_THROWS_AS(volterra_train(x, x, 10, 1e-3, 1e-4, 5), ConfigError);  // < 10 L samples
    std::vector<double> y(400, 1.0), z(401, 1.0);
    CHECK_THROWS_AS(volterra_train(y, z, 10, 1e-3, 1e-4, 5), ConfigError);
    std::vector<double> silent(400, 0.0);
    CHECK_THROWS_AS(volterra_train(silent, silent, 10, 1e-3, 1e-4, 5), ConfigError);
}
