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

#include <span>
#include <vector>

namespace rydarp {

enum class ShapeKind { gaussian, smoothed_square, constant };

// Envelope of one excitation laser. `peak` is a Rabi frequency in rad/us,
// times are in us. For smoothed_square, `edge` is the raised-cosine rise
// time; the half-maximum points sit at the middle of each edge so `fwhm`
// keeps its usual meaning.
struct PulseShape {
    ShapeKind kind = ShapeKind::constant;
    double peak = 0.0;
    double center = 0.0;
    double fwhm = 1.0;
    double edge = 0.0;

    static PulseShape gaussian(double peak, double center, double fwhm);
    static PulseShape smoothed_square(double peak, double center, double fwhm, double edge);
    static PulseShape constant(double peak);

    void validate() const;
    // Half-extent of the nonzero support around `center`; infinite for
    // gaussian and constant shapes.
    double half_support() const;
};

double shape_value(const PulseShape& s, double t);

// Linear sweep of the upper-transition detuning. Inside [t0, t1] the
// detuning is center_detuning + rate * (t - midpoint); outside it is held
// at the end value.
struct ChirpSpec {
    double center_detuning = 0.0;  // rad/us
    double rate = 0.0;             // rad/us^2, signed
    double t0 = 0.0;
    double t1 = 0.0;

    double midpoint() const { return 0.5 * (t0 + t1); }
    void validate() const;
};

double chirp_value(const ChirpSpec& c, double t);

// Instantaneous laser parameters at one time.
struct LaserSample {
    double omega1;
    double omega2;
    double delta1;
    double delta2;
};

// Two-photon excitation schedule on [0, duration].
struct PulseSchedule {
    PulseShape omega1_shape;
    PulseShape omega2_shape;
    double delta1 = 0.0;
    ChirpSpec chirp;
    double duration = 0.0;

    void validate() const;
    bool contains(double t) const;
    // Throws DomainError for t outside [0, duration].
    LaserSample at(double t) const;
};

struct CollectiveDrive {
    double omega_n;  // collective Rabi frequency, sign of the single-atom one
    double delta;    // two-photon detuning
};

// Adiabatic elimination of the intermediate level applied at time t, with
// sqrt(n_atoms) collective enhancement.
CollectiveDrive effective_rabi_and_delta(const PulseSchedule& schedule, double n_atoms, double t);

// |dOmega/dt * delta - Omega * ddelta/dt| / (2 (Omega^2 + delta^2)^(3/2)).
// Returns +inf where the gap closes.
double adiabaticity_ratio(double omega_n, double delta, double omega_n_dot, double delta_dot);

// Pointwise ratio of a time-dependent drive; derivatives by central finite
// difference with the given step.
template <class OmegaFn, class DeltaFn>
double adiabaticity_ratio(const OmegaFn& omega_n, const DeltaFn& delta, double t, double step)
{
    const double om_dot = (omega_n(t + step) - omega_n(t - step)) / (2.0 * step);
    const double de_dot = (delta(t + step) - delta(t - step)) / (2.0 * step);
    return adiabaticity_ratio(omega_n(t), delta(t), om_dot, de_dot);
}

// Same ratio over uniformly sampled traces (central differences inside,
// one-sided at the ends).
std::vector<double> adiabaticity_ratio(std::span<const double> omega_n, std::span<const double> delta,
                                       double step);

// Trapezoidal integral of |omega_n| over uniformly spaced samples.
double pulse_area(std::span<const double> omega_n, double step);

// Area of the collective drive of a schedule sampled at `step`.
double pulse_area(const PulseSchedule& schedule, double n_atoms, double step);

}  // namespace rydarp
