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

#include "rydarp/photon.hpp"

#include <cmath>
#include <limits>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

double binomial(std::size_t n, std::size_t k)
{
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

void check_probability(double v, const char* what)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

ExcitationDistribution ExcitationDistribution::from(std::initializer_list<double> probabilities)
{
    if (probabilities.size() > max_excitations + 1)
        throw DomainError("excitation distribution limited to n <= 3");
    ExcitationDistribution d;
    d.p.fill(0.0);
    std::size_t n = 0;
    for (double v : probabilities)
        d.p[n++] = v;
    return d;
}

double ExcitationDistribution::total() const
{
    double s = 0.0;
    for (double v : p)
        s += v;
    return s;
}

double ExcitationDistribution::mean() const
{
    double s = 0.0;
    for (std::size_t n = 1; n < p.size(); ++n)
        s += static_cast<double>(n) * p[n];
    return s;
}

double ExcitationDistribution::factorial_moment2() const
{
    double s = 0.0;
    for (std::size_t n = 2; n < p.size(); ++n)
        s += static_cast<double>(n * (n - 1)) * p[n];
    return s;
}

void ExcitationDistribution::validate() const
{
    for (double v : p)
        if (!(v >= 0.0))
            throw DomainError("excitation probabilities must be non-negative");
    if (std::abs(total() - 1.0) > 1e-9)
        throw DomainError("excitation probabilities must sum to 1");
}

ExcitationDistribution ExcitationDistribution::normalized() const
{
    const double s = total();
    if (!(s > 0.0))
        throw DomainError("cannot normalize an empty distribution");
    ExcitationDistribution d = *this;
    for (double& v : d.p)
        v /= s;
    return d;
}

void RetrievalModel::validate() const
{
    check_probability(eta_retrieval, "eta_retrieval");
    check_probability(eta_detection, "eta_detection");
    check_probability(splitter_ratio, "splitter_ratio");
}

ExcitationDistribution thin_distribution(const ExcitationDistribution& d, double eta)
{
    check_probability(eta, "thinning efficiency");
    ExcitationDistribution out;
    out.p.fill(0.0);
    for (std::size_t n = 0; n < d.p.size(); ++n) {
        if (d.p[n] == 0.0)
            continue;
        for (std::size_t m = 0; m <= n; ++m)
            out.p[m] += d.p[n] * binomial(n, m) * std::pow(eta, static_cast<double>(m)) *
                        std::pow(1.0 - eta, static_cast<double>(n - m));
    }
    return out;
}

double g2_of_distribution(const ExcitationDistribution& d)
{
    const double mean = d.mean();
    if (!(mean > 0.0))
        throw DomainError("g2 undefined for a distribution with zero mean");
    return d.factorial_moment2() / (mean * mean);
}

HbtProbabilities hbt_probabilities(const ExcitationDistribution& d, const RetrievalModel& r)
{
    r.validate();
    const double eta = r.total_efficiency();
    const double to_a = eta * r.splitter_ratio;
    const double to_b = eta * (1.0 - r.splitter_ratio);

    // Each excitation independently lands on A, on B, or is lost.
    double none_a = 0.0, none_b = 0.0, none_both = 0.0;
    for (std::size_t n = 0; n < d.p.size(); ++n) {
        const double k = static_cast<double>(n);
        none_a += d.p[n] * std::pow(1.0 - to_a, k);
        none_b += d.p[n] * std::pow(1.0 - to_b, k);
        none_both += d.p[n] * std::pow(1.0 - eta, k);
    }
    const double total = d.total();
    HbtProbabilities h;
    h.click_a = total - none_a;
    h.click_b = total - none_b;
    h.click_sum = h.click_a + h.click_b;
    h.coincidence = total - none_a - none_b + none_both;
    const double denom = h.click_a * h.click_b;
    h.g2_measured = denom > 0.0 ? h.coincidence / denom : std::numeric_limits<double>::quiet_NaN();
    return h;
}

}  // namespace rydarp
