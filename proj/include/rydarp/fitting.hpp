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

#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydarp {

// One measured or simulated scan: y(x) with optional per-point sigma.
struct ScanCurve {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;  // empty = unit weights

    void validate() const;  // x strictly increasing, y >= 0, sizes consistent
    std::size_t size() const { return x.size(); }
};

enum class FitModel { damped_rabi, asymmetric_gaussian };

std::string to_string(FitModel m);

// y = a exp(-b x^2) [1 - exp(-c x^2) cos(d x)]
double damped_rabi_model(std::span<const double> params, double x);
// y = h exp(-(x - x0)^2 / (2 sigma^2)), sigma = sigma_left for x < x0 and
// sigma_right otherwise. params = (h, x0, sigma_left, sigma_right).
double asymmetric_gaussian_model(std::span<const double> params, double x);

struct FitResult {
    FitModel model = FitModel::damped_rabi;
    std::vector<double> params;
    double residual_norm = 0.0;  // sqrt of the weighted sum of squares
    double gradient_norm = 0.0;
    bool converged = false;      // projected gradient below 1e-8 max(1 + |r|, |J| |r|)
    bool degenerate = false;     // parameters not identifiable from the data
    int iterations = 0;
    Eigen::MatrixXd covariance;
    double x_min = 0.0;          // fitted domain
    double x_max = 0.0;

    double evaluate(double x) const;
};

inline constexpr int max_fit_iterations = 500;

// Damped Gauss-Newton with step-halving line search on the weighted residual.
// b and c are clamped at zero. Without `init` the starting point comes from
// the data: a = max(y), d from the strongest spectral line of y - mean(y),
// b and c from log-envelope regressions; a few neighbouring starts are tried
// and the lowest residual wins.
FitResult fit_damped_rabi(const ScanCurve& curve, std::optional<std::array<double, 4>> init = std::nullopt);
FitResult fit_asymmetric_gaussian(const ScanCurve& curve,
                                  std::optional<std::array<double, 4>> init = std::nullopt);

struct PeakMetrics {
    double position = 0.0;
    double value = 0.0;
    double width80 = 0.0;  // right - left
    double left = 0.0;     // ends of the contiguous region with y >= 0.8 value
    double right = 0.0;
    bool edge_peak = false;  // maximum sits on the domain boundary
    bool plateau = false;    // region runs into the right end of the domain
    // Lowest interior local minimum to the right of the peak; NaN when the
    // curve has none there.
    double secondary_minimum = std::numeric_limits<double>::quiet_NaN();

    // Damped oscillation: the curve dips below 80% of the peak and recovers.
    bool oscillates() const { return secondary_minimum < 0.8 * value; }
};

// Dense 2000-point scan plus golden-section refinement of the maximum; the
// 80% crossings are bisected.
PeakMetrics peak_metrics(const std::function<double(double)>& f, double x_min, double x_max);
PeakMetrics peak_metrics(const FitResult& fit);
// Sampled curve: maximum sample, crossings by linear interpolation.
PeakMetrics peak_metrics(const ScanCurve& curve);

double robustness_ratio(double width_a, double width_b);

// sqrt((pi/2) / (1/w1^2 + 1/w2^2)), same length unit as the waists.
double effective_excitation_size(double w1, double w2);

}  // namespace rydarp
