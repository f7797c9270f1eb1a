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
#include <cstddef>
#include <initializer_list>

namespace rydarp {

inline constexpr std::size_t max_excitations = 3;

// Probabilities p_n of n excitations (or photons), n = 0..3.
struct ExcitationDistribution {
    std::array<double, max_excitations + 1> p{1.0, 0.0, 0.0, 0.0};

    static ExcitationDistribution from(std::initializer_list<double> probabilities);

    double operator[](std::size_t n) const { return p[n]; }
    double total() const;
    double mean() const;
    double factorial_moment2() const;  // <n(n-1)>
    // Throws DomainError on negative entries or |sum - 1| > 1e-9.
    void validate() const;
    ExcitationDistribution normalized() const;
};

struct RetrievalModel {
    double eta_retrieval = 1.0;   // excitation -> photon in the collection mode
    double eta_detection = 1.0;   // per-photon detection
    double splitter_ratio = 0.5;  // transmission towards detector A

    void validate() const;
    double total_efficiency() const { return eta_retrieval * eta_detection; }
};

// Independent per-quantum survival with probability eta.
ExcitationDistribution thin_distribution(const ExcitationDistribution& d, double eta);

// <n(n-1)> / <n>^2; throws DomainError when <n> = 0.
double g2_of_distribution(const ExcitationDistribution& d);

struct HbtProbabilities {
    double click_a;
    double click_b;
    double click_sum;    // click_a + click_b
    double coincidence;  // both detectors fire
    double g2_measured;  // coincidence / (click_a * click_b); NaN if a detector never fires
};

// Exact threshold-detector statistics behind a beamsplitter.
HbtProbabilities hbt_probabilities(const ExcitationDistribution& d, const RetrievalModel& r);

}  // namespace rydarp
