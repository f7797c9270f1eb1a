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

#include "rydarp/monte_carlo.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rydarp/errors.hpp"
#include "rydarp/parallel.hpp"

namespace rydarp {

namespace {

double draw_shift(const BlockadeNoise& b, std::mt19937_64& engine)
{
    switch (b.kind) {
    case ShiftDistribution::point:
        return b.value;
    case ShiftDistribution::normal: {
        std::normal_distribution<double> dist(b.mean, b.stddev);
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const double v = dist(engine);
            if (v >= b.lower && v <= b.upper)
                return v;
        }
        throw DomainError("truncated normal blockade distribution rejects nearly every draw");
    }
    case ShiftDistribution::log_uniform: {
        std::uniform_real_distribution<double> dist(std::log(b.lower), std::log(b.upper));
        return std::exp(dist(engine));
    }
    }
    return b.value;
}

}  // namespace

void BlockadeNoise::validate() const
{
    switch (kind) {
    case ShiftDistribution::point:
        if (!std::isfinite(value))
            throw DomainError("point-mass blockade shift must be finite");
        break;
    case ShiftDistribution::normal:
        if (!(stddev >= 0.0) || !(upper >= lower))
            throw DomainError("normal blockade distribution needs stddev >= 0 and lower <= upper");
        break;
    case ShiftDistribution::log_uniform:
        if (!(lower > 0.0) || !(upper >= lower))
            throw DomainError("log-uniform blockade distribution needs 0 < lower <= upper");
        break;
    }
}

void NoiseSpec::validate() const
{
    if (!(mean_atoms >= 1.0))
        throw DomainError("mean atom number must be >= 1");
    blockade.validate();
}

TrialSample sample_trial(const NoiseSpec& noise, std::uint64_t trial)
{
    std::mt19937_64 engine(derived_seed(noise.seed, trial));
    TrialSample s{noise.mean_atoms, 0.0};
    if (noise.poisson_atoms) {
        std::poisson_distribution<long> dist(noise.mean_atoms);
        s.n_atoms = static_cast<double>(std::max(1L, dist(engine)));
    }
    s.blockade_shift = draw_shift(noise.blockade, engine);
    return s;
}

MonteCarloResult run_monte_carlo(const ModelSpec& model, const PulseSchedule& schedule, const NoiseSpec& noise,
                                 int trials, const IntegratorOptions& opts, unsigned workers)
{
    if (trials < 1)
        throw DomainError("Monte Carlo needs at least one trial");
    noise.validate();
    if (std::holds_alternative<Ladder3Model>(model))
        throw DomainError("Monte Carlo sampling applies to the superatom and full-ensemble tiers");

    const auto count = static_cast<std::size_t>(trials);
    std::vector<Trajectory> runs(count);
    std::vector<TrialSample> samples(count);

    parallel_for_index(count, workers, [&](std::size_t i) {
        ModelSpec trial_model = model;
        if (auto* m = std::get_if<SuperatomModel>(&trial_model)) {
            samples[i] = sample_trial(noise, i);
            m->params.n_atoms = samples[i].n_atoms;
            m->params.blockade_shift = samples[i].blockade_shift;
        } else if (auto* m = std::get_if<FullEnsembleModel>(&trial_model)) {
            if (noise.poisson_atoms)
                throw DomainError("full-ensemble Monte Carlo keeps N fixed; disable Poisson atom number");
            std::mt19937_64 engine(derived_seed(noise.seed, i));
            const int n = m->params.n_atoms;
            m->params.pair_shifts = Eigen::MatrixXd::Zero(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    m->params.pair_shifts(a, b) = m->params.pair_shifts(b, a) = draw_shift(noise.blockade, engine);
            samples[i] = {static_cast<double>(n), m->params.pair_shifts.size() > 1 ? m->params.pair_shifts(0, 1) : 0.0};
        }
        try {
            runs[i] = evolve_from_ground(trial_model, schedule, opts);
        } catch (const NumericFailure& e) {
            throw NumericFailure("trial " + std::to_string(i) + ": " + e.what(), e.magnitude());
        }
    });

    MonteCarloResult out;
    out.samples = std::move(samples);
    out.mean = runs.front();
    out.mean.amplitudes.clear();
    const double inv = 1.0 / static_cast<double>(count);
    for (auto& pop : out.mean.populations)
        for (double& v : pop)
            v *= inv;
    for (double& r : out.mean.adiabaticity)
        r *= inv;
    out.pooled.p.fill(0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const Trajectory& run = runs[i];
        if (i > 0) {
            for (std::size_t s = 0; s < run.populations.size(); ++s)
                for (std::size_t k = 0; k < run.populations[s].size(); ++k)
                    out.mean.populations[s][k] += inv * run.populations[s][k];
            for (std::size_t k = 0; k < run.adiabaticity.size(); ++k)
                out.mean.adiabaticity[k] += inv * run.adiabaticity[k];
            out.mean.max_norm_drift = std::max(out.mean.max_norm_drift, run.max_norm_drift);
            out.mean.min_eigenvalue = std::min(out.mean.min_eigenvalue, run.min_eigenvalue);
        }
        out.per_trial.push_back(run.final_distribution);
        for (std::size_t n = 0; n < out.pooled.p.size(); ++n)
            out.pooled.p[n] += inv * run.final_distribution.p[n];
    }
    out.mean.final_distribution = out.pooled;
    return out;
}

}  // namespace rydarp
