// Copyright 2026 The rydarp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rydarp/errors.hpp"
#include "rydarp/fitting.hpp"

using namespace rydarp;

namespace {

constexpr std::array<double, 4> rabi_truth{0.06, 0.02, 0.5, std::numbers::pi};

ScanCurve sample(const std::function<double(double)>& f, double lo, double hi, int n)
{
    ScanCurve c;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        c.x.push_back(x);
        c.y.push_back(f(x));
    }
    return c;
}

ScanCurve rabi_curve(const std::array<double, 4>& p)
{
    return sample([&](double x) { return damped_rabi_model(p, x); }, 0.05, 6.0, 60);
}

}  // namespace

TEST_CASE("model functions")
{
    CHECK(damped_rabi_model(rabi_truth, 0.0) == 0.0);
    const double x = 1.3;
    CHECK(damped_rabi_model(rabi_truth, x) ==
          doctest::Approx(0.06 * std::exp(-0.02 * x * x) * (1 - std::exp(-0.5 * x * x) * std::cos(std::numbers::pi * x))));
    const std::array<double, 4> g{0.05, -40.0, 6.0, 10.0};
    CHECK(asymmetric_gaussian_model(g, -40.0) == doctest::Approx(0.05));
    CHECK(asymmetric_gaussian_model(g, -46.0) == doctest::Approx(0.05 * std::exp(-0.5)));
    CHECK(asymmetric_gaussian_model(g, -30.0) == doctest::Approx(0.05 * std::exp(-0.5)));
}

TEST_CASE("noiseless damped-Rabi round trip")
{
    const ScanCurve c = rabi_curve(rabi_truth);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> jitter(0.8, 1.2);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<double, 4> init;
        for (std::size_t k = 0; k < 4; ++k)
            init[k] = rabi_truth[k] * jitter(rng);
        const FitResult fit = fit_damped_rabi(c, init);
        CHECK(fit.converged);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(fit.params[k] == doctest::Approx(rabi_truth[k]).epsilon(1e-6));
    }
    const FitResult automatic = fit_damped_rabi(c);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(automatic.params[k] == doctest::Approx(rabi_truth[k]).epsilon(1e-6));
}

TEST_CASE("damped-Rabi fit on noisy data")
{
    const ScanCurve clean = rabi_curve(rabi_truth);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.02);
        ScanCurve c = clean;
        for (double& y : c.y)
            y *= 1.0 + noise(rng);
        const FitResult fit = fit_damped_rabi(c);
        CAPTURE(seed);
        CHECK(fit.converged);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(fit.params[k] == doctest::Approx(rabi_truth[k]).epsilon(0.05));
    }
}

TEST_CASE("all-zero data is degenerate")
{
    ScanCurve c = rabi_curve(rabi_truth);
    for (double& y : c.y)
        y = 0.0;
    const FitResult fit = fit_damped_rabi(c);
    CHECK(fit.degenerate);
    CHECK(std::abs(fit.params[0]) < 1e-12);
}

TEST_CASE("fit never ends above its starting residual")
{
    const ScanCurve c = rabi_curve({0.2, 0.05, 0.3, 2.5});
    const std::array<double, 4> init{0.1, 0.1, 1.0, 2.0};
    const FitResult fit = fit_damped_rabi(c, init);
    double start = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        start += std::pow(c.y[i] - damped_rabi_model(init, c.x[i]), 2);
    CHECK(fit.residual_norm <= std::sqrt(start));
    CHECK(fit.params[1] >= 0.0);
    CHECK(fit.params[2] >= 0.0);
}

TEST_CASE("sigma-weighted fit")
{
    ScanCurve c = rabi_curve(rabi_truth);
    c.sigma.assign(c.size(), 0.001);
    const FitResult fit = fit_damped_rabi(c);
    CHECK(fit.converged);
    CHECK(fit.params[3] == doctest::Approx(std::numbers::pi).epsilon(1e-6));
    c.sigma.pop_back();
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("scan curve validation")
{
    ScanCurve c;
    c.x = {0.0, 1.0, 1.0};
    c.y = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.x = {0.0, 1.0, 2.0};
    c.y = {0.0, -1.0, 2.0};
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("asymmetric Gaussian round trip")
{
    const std::array<double, 4> truth{0.05, -40.0, 6.0, 10.0};
    const ScanCurve c = sample([&](double x) { return asymmetric_gaussian_model(truth, x); }, -70.0, -10.0, 61);
    const FitResult fit = fit_asymmetric_gaussian(c);
    CHECK(fit.converged);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(fit.params[k] == doctest::Approx(truth[k]).epsilon(1e-6));
    // sigma_right > sigma_left: slower falloff towards less negative x.
    CHECK(asymmetric_gaussian_model(fit.params, -30.0) > asymmetric_gaussian_model(fit.params, -50.0));

    const std::array<double, 4> sym{0.1, 2.0, 3.0, 3.0};
    const ScanCurve s = sample([&](double x) { return asymmetric_gaussian_model(sym, x); }, -10.0, 14.0, 49);
    const FitResult sf = fit_asymmetric_gaussian(s);
    CHECK(sf.params[2] == doctest::Approx(sf.params[3]).epsilon(1e-6));
}

TEST_CASE("peak metrics of an undamped oscillation")
{
    FitResult fit;
    fit.params = {1.0, 0.0, 0.0, 2.0};
    fit.x_min = 0.05;
    fit.x_max = 3.0;
    const PeakMetrics m = peak_metrics(fit);
    CHECK(m.position == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-6));
    CHECK(m.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.width80 == doctest::Approx(1.8546 / 2.0).epsilon(1e-4));
    CHECK_FALSE(m.edge_peak);
    CHECK_FALSE(m.plateau);
}

TEST_CASE("peak metrics of a Gaussian are symmetric and scale correctly")
{
    auto g = [](double x) { return 3.0 * std::exp(-x * x / 2.0); };
    const PeakMetrics m = peak_metrics(g, -5.0, 5.0);
    CHECK(m.position == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(-m.left == doctest::Approx(m.right).epsilon(1e-6));
    CHECK(m.width80 == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(1.25))).epsilon(1e-6));

    const PeakMetrics scaled = peak_metrics([&](double x) { return 7.0 * g(x); }, -5.0, 5.0);
    CHECK(scaled.width80 == doctest::Approx(m.width80).epsilon(1e-9));
    const PeakMetrics stretched = peak_metrics([&](double x) { return g(x / 4.0); }, -20.0, 20.0);
    CHECK(stretched.width80 == doctest::Approx(4.0 * m.width80).epsilon(1e-6));
}

TEST_CASE("plateau and oscillation flags")
{
    FitResult plateau;
    plateau.params = {0.2, 0.0, 1.0, 0.05};
    plateau.x_min = 0.05;
    plateau.x_max = 6.0;
    const PeakMetrics p = peak_metrics(plateau);
    CHECK(p.plateau);
    CHECK(p.right == doctest::Approx(6.0));
    CHECK_FALSE(p.oscillates());

    FitResult ringing;
    ringing.params = {0.06, 0.02, 0.5, std::numbers::pi};
    ringing.x_min = 0.05;
    ringing.x_max = 6.0;
    const PeakMetrics r = peak_metrics(ringing);
    CHECK(r.oscillates());
    CHECK(r.secondary_minimum < 0.8 * r.value);

    const PeakMetrics rising = peak_metrics([](double x) { return x; }, 0.0, 1.0);
    CHECK(rising.edge_peak);
}

TEST_CASE("peak metrics of sampled curves")
{
    const ScanCurve c = sample([](double x) { return 1.0 - std::abs(x); }, -1.0, 1.0, 21);
    const PeakMetrics m = peak_metrics(c);
    CHECK(m.position == doctest::Approx(0.0));
    CHECK(m.value == doctest::Approx(1.0));
    CHECK(m.width80 == doctest::Approx(0.4));
}

TEST_CASE("robustness ratio and excitation size")
{
    CHECK(robustness_ratio(1.5, 1.5) == 1.0);
    CHECK(robustness_ratio(2.6, 1.0) == doctest::Approx(2.6));
    CHECK(robustness_ratio(2.1, 1.0) == doctest::Approx(2.1));
    CHECK_THROWS_AS(robustness_ratio(1.0, 0.0), DomainError);

    CHECK(effective_excitation_size(7.4, 8.0) == doctest::Approx(6.8).epsilon(0.01));
    CHECK(effective_excitation_size(5.0, 5.0) == doctest::Approx(5.0 * std::sqrt(std::numbers::pi / 4)));
    CHECK(effective_excitation_size(5.0, 1e9) == doctest::Approx(5.0 * std::sqrt(std::numbers::pi / 2)));
    CHECK_THROWS_AS(effective_excitation_size(0.0, 1.0), DomainError);
}
