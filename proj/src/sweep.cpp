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

#include <string>

#include "rydarp/config.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/parallel.hpp"
#include "rydarp/scenario.hpp"

namespace rydarp {

ScanCurve SweepResult::curve_data() const
{
    ScanCurve c;
    c.x.reserve(points.size());
    c.y.reserve(points.size());
    bool weighted = !points.empty();
    for (const SweepPoint& p : points) {
        c.x.push_back(p.x);
        c.y.push_back(p.click_sum);
        weighted = weighted && p.click_sum_stderr > 0.0;
    }
    // Monte-Carlo standard errors weight the fit when every point has one.
    if (weighted)
        for (const SweepPoint& p : points)
            c.sigma.push_back(p.click_sum_stderr);
    return c;
}

SweepResult sweep_execute(const ScenarioConfig& cfg, std::span<const double> axis,
                          const std::function<SweepPoint(double, std::size_t)>& point)
{
    if (axis.empty())
        throw DomainError("sweep axis is empty");
    if (cfg.noise.trials < 1)
        throw ConfigError("noise.trials", "at least one trial per point is required");

    SweepResult result;
    result.points.resize(axis.size());
    parallel_for_index(axis.size(), cfg.workers, [&](std::size_t i) {
        const std::string where = "sweep point " + std::to_string(i) + " (x = " + std::to_string(axis[i]) + "): ";
        try {
            result.points[i] = point(axis[i], i);
        } catch (const NumericFailure& e) {
            throw NumericFailure(where + e.what(), e.magnitude());
        } catch (const DomainError& e) {
            throw DomainError(where + e.what());
        }
    });
    result.provenance = make_provenance(cfg);
    return result;
}

}  // namespace rydarp
