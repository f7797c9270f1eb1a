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

#include "rydarp/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

constexpr double four_ln2 = 4.0 * std::numbers::ln2;

}  // namespace

PulseShape PulseShape::gaussian(double peak, double center, double fwhm)
{
    return {ShapeKind::gaussian, peak, center, fwhm, 0.0};
}

PulseShape PulseShape::smoothed_square(double peak, double center, double fwhm, double edge)
{
    return {ShapeKind::smoothed_square, peak, center, fwhm, edge};
}

PulseShape PulseShape::constant(double peak) { return {ShapeKind::constant, peak, 0.0, 1.0, 0.0}; }

void PulseShape::validate() const
{
    if (!(peak >= 0.0))
        throw DomainError("pulse peak must be non-negative");
    if (!(fwhm > 0.0))
        throw DomainError("pulse fwhm must be positive");
    if (kind == ShapeKind::smoothed_square && (edge < 0.0 || edge > fwhm))
        throw DomainError("smoothed-square edge must lie in [0, fwhm]");
}

double PulseShape::half_support() const
{
    if (kind == ShapeKind::smoothed_square)
        return 0.5 * (fwhm + edge);
    return std::numeric_limits<double>::infinity();
}

double shape_value(const PulseShape& s, double t)
{
    switch (s.kind) {
    case ShapeKind::gaussian: {
        const double u = (t - s.center) / s.fwhm;
        return s.peak * std::exp(-four_ln2 * u * u);
    }
    case ShapeKind::smoothed_square: {
        const double r = std::abs(t - s.center);
        const double flat = 0.5 * (s.fwhm - s.edge);
        if (r <= flat)
            return s.peak;
        if (r >= flat + s.edge)
            return 0.0;
        return s.peak * 0.5 * (1.0 + std::cos(std::numbers::pi * (r - flat) / s.edge));
    }
    case ShapeKind::constant:
        return s.peak;
    }
    return 0.0;
}

void ChirpSpec::validate() const
{
    if (!(t1 >= t0))
        throw DomainError("chirp window must be ordered");
}

double chirp_value(const ChirpSpec& c, double t)
{
    const double clamped = std::clamp(t, c.t0, c.t1);
    return c.center_detuning + c.rate * (clamped - c.midpoint());
}

void PulseSchedule::validate() const
{
    if (!(duration > 0.0))
        throw DomainError("schedule duration must be positive");
    omega1_shape.validate();
    omega2_shape.validate();
    chirp.validate();
    for (const PulseShape* s : {&omega1_shape, &omega2_shape}) {
        const double half = s->half_support();
        if (std::isfinite(half) && (s->center - half < -1e-12 || s->center + half > duration + 1e-12))
            throw DomainError("pulse support extends outside [0, duration]");
    }
}

bool PulseSchedule::contains(double t) const
{
    constexpr double slack = 1e-12;
    return t >= -slack && t <= duration + slack;
}

LaserSample PulseSchedule::at(double t) const
{
    if (!contains(t))
        throw DomainError("time " + std::to_string(t) + " us outside schedule [0, " +
                          std::to_string(duration) + "]");
    return {shape_value(omega1_shape, t), shape_value(omega2_shape, t), delta1, chirp_value(chirp, t)};
}

CollectiveDrive effective_rabi_and_delta(const PulseSchedule& schedule, double n_atoms, double t)
{
    const LaserSample s = schedule.at(t);
    if (s.delta1 == 0.0)
        throw DomainError("adiabatic elimination undefined for delta1 = 0");
    const double omega = s.omega1 * s.omega2 / (2.0 * s.delta1);
    return {std::sqrt(n_atoms) * omega, s.delta1 + s.delta2};
}

double adiabaticity_ratio(double omega_n, double delta, double omega_n_dot, double delta_dot)
{
    const double gap2 = omega_n * omega_n + delta * delta;
    if (gap2 == 0.0)
        return std::numeric_limits<double>::infinity();
    return std::abs(omega_n_dot * delta - omega_n * delta_dot) / (2.0 * gap2 * std::sqrt(gap2));
}

std::vector<double> adiabaticity_ratio(std::span<const double> omega_n, std::span<const double> delta,
                                       double step)
{
    if (omega_n.size() != delta.size())
        throw DomainError("adiabaticity traces must have equal length");
    const std::size_t n = omega_n.size();
    std::vector<double> r(n, 0.0);
    if (n < 2)
        return r;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        const double span = static_cast<double>(hi - lo) * step;
        r[i] = adiabaticity_ratio(omega_n[i], delta[i], (omega_n[hi] - omega_n[lo]) / span,
                                  (delta[hi] - delta[lo]) / span);
    }
    return r;
}

double pulse_area(std::span<const double> omega_n, double step)
{
    if (omega_n.size() < 2)
        return 0.0;
    double sum = 0.5 * (std::abs(omega_n.front()) + std::abs(omega_n.back()));
    for (std::size_t i = 1; i + 1 < omega_n.size(); ++i)
        sum += std::abs(omega_n[i]);
    return sum * step;
}

double pulse_area(const PulseSchedule& schedule, double n_atoms, double step)
{
    const auto steps = static_cast<std::size_t>(std::llround(schedule.duration / step));
    const double h = schedule.duration / static_cast<double>(steps);
    std::vector<double> samples(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        samples[i] = effective_rabi_and_delta(schedule, n_atoms, h * static_cast<double>(i)).omega_n;
    return pulse_area(samples, h);
}

}  // namespace rydarp
