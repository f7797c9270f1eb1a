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

#include <cstdint>
#include <vector>

#include "rydarp/dynamics.hpp"

namespace rydarp {

enum class ShiftDistribution { point, normal, log_uniform };

// Sampling law for the blockade shift V (rad/us). Normal draws are
// truncated to [lower, upper] by rejection.
struct BlockadeNoise {
    ShiftDistribution kind = ShiftDistribution::point;
    double value = 0.0;  // point mass
    double mean = 0.0;   // normal
    double stddev = 0.0;
    double lower = 0.0;  // bounds for normal and log-uniform
    double upper = 0.0;

    void validate() const;
};

struct NoiseSpec {
    double mean_atoms = 1.0;
    bool poisson_atoms = false;
    BlockadeNoise blockade;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrialSample {
    double n_atoms;
    double blockade_shift;
};

// Deterministic draw for one trial; the engine is seeded with
// derived_seed(noise.seed, trial).
TrialSample sample_trial(const NoiseSpec& noise, std::uint64_t trial);

struct MonteCarloResult {
    Trajectory mean;  // populations averaged over trials, by index
    std::vector<ExcitationDistribution> per_trial;
    std::vector<TrialSample> samples;
    ExcitationDistribution pooled;
};

// Evolves `trials` realizations of `model` from the ground state. For the
// superatom tier each trial draws N and V; for the full-ensemble tier every
// pair shift is drawn independently (N stays fixed). Trials run on up to
// `workers` threads and are merged by index.
MonteCarloResult run_monte_carlo(const ModelSpec& model, const PulseSchedule& schedule, const NoiseSpec& noise,
                                 int trials, const IntegratorOptions& opts = {}, unsigned workers = 1);

}  // namespace rydarp
