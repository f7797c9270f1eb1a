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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydarp/dynamics.hpp"
#include "rydarp/fitting.hpp"
#include "rydarp/monte_carlo.hpp"
#include "rydarp/photon.hpp"

namespace rydarp {

// Scenario parameters in configuration units (MHz, ns). Defaults are the
// experimental values; the damping and detection entries are calibration
// knobs and live in their own sections.
struct ScenarioConfig {
    struct Physics {
        double omega1_mhz = 2.3;
        double omega2_mhz = 10.7;
        double delta1_mhz = -40.0;
        double delta2_center_mhz = 40.0;
        double n_atoms = 180.0;
        double gamma_e_mhz = 5.75;  // Rb 5P1/2 natural linewidth (literature value)
        double gamma_r_mhz = 0.0;
    } physics;

    struct Pulse {
        double duration_ns = 500.0;
        double omega1_fwhm_ns = 467.0;
        double omega1_edge_ns = 30.0;
        double omega2_fwhm_ns = 188.0;
        double pi_pulse_fwhm_ns = 114.0;
        double chirp_unit_mhz_per_us = 12.0;
    } pulse;

    struct Model {
        std::string tier = "superatom";
        bool include_double = true;
        bool intermediate_decay = true;
        bool light_shift = false;
    } model;

    struct Noise {
        bool poisson_atoms = false;
        std::string blockade_kind = "point";  // point | normal | log_uniform
        double blockade_value_mhz = 100.0;
        double blockade_mean_mhz = 0.0;
        double blockade_stddev_mhz = 0.0;
        double blockade_lower_mhz = 0.0;
        double blockade_upper_mhz = 0.0;
        int trials = 1;
        bool common_random_numbers = true;
    } noise;

    RetrievalModel retrieval{1.0, 1.0, 0.5};

    struct Integrator {
        double step_ns = 0.5;
        double norm_tolerance = 1e-7;
        int stride = 1000;
    } integrator;

    struct RabiSweep {
        double duration_min_ns = 10.0;
        double duration_max_ns = 1000.0;
        int points = 100;
    } rabi;

    struct AreaSweep {
        double area_min_pi = 0.05;
        double area_max_pi = 6.0;
        int points = 60;
        std::vector<double> chirp_rates_u{0, 1, 2, 3, 4, 5, 6};
    } area;

    struct DetuningSweep {
        double delta1_min_mhz = -70.0;
        double delta1_max_mhz = -10.0;
        int points = 61;
        double chirp_rate_u = 4.0;
        double area_search_min_pi = 0.3;
        double area_search_max_pi = 5.0;
    } detuning;

    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;  // throws ConfigError naming the dotted key
};

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string code_version;
};

struct SweepPoint {
    double x = 0.0;
    double click_sum = 0.0;
    double click_sum_stderr = 0.0;
    double g2_measured = 0.0;
    ExcitationDistribution distribution;
};

struct SweepResult {
    std::string scenario;
    std::string curve;    // label of this curve within the scenario
    std::string x_label;  // e.g. "area_pi", "duration_us", "delta1_mhz"
    double parameter = 0.0;  // curve parameter (chirp rate in u for area scans)
    std::vector<SweepPoint> points;
    std::optional<FitResult> fit;
    std::optional<PeakMetrics> peak;
    Provenance provenance;

    ScanCurve curve_data() const;
};

// Evaluates point(x_i, i) for every axis value on cfg.workers threads and
// merges by index. The first failing index aborts the sweep.
SweepResult sweep_execute(const ScenarioConfig& cfg, std::span<const double> axis,
                          const std::function<SweepPoint(double, std::size_t)>& point);

// Building blocks shared by the scenarios.
ModelSpec scenario_model(const ScenarioConfig& cfg);
NoiseSpec scenario_noise(const ScenarioConfig& cfg, std::uint64_t seed);
IntegratorOptions scenario_integrator(const ScenarioConfig& cfg);
// Chirped (or, with rate 0, transform-limited) Gaussian-474/square-795 pulse.
PulseSchedule excitation_schedule(const ScenarioConfig& cfg, double omega2_peak, double chirp_rate, double delta1,
                                  double omega2_fwhm_us);
// Area of the collective drive (mean atom number) per unit omega2 peak.
double area_per_omega2(const ScenarioConfig& cfg, double delta1, double omega2_fwhm_us);
// Monte-Carlo evaluation of one schedule mapped through detection.
SweepPoint simulate_point(const ScenarioConfig& cfg, const PulseSchedule& schedule, double x, std::size_t index);

struct RabiScan {
    SweepResult sweep;
    double omega_n_input = 0.0;  // rad/us, from the configured lasers
    double omega_n_fit = 0.0;    // fitted oscillation frequency
    double atom_number = 0.0;    // estimate_atom_number(omega_n_fit, omega)
};

// Square pulses of variable duration at the configured amplitudes and zero
// chirp; x is the duration in us.
RabiScan run_rabi_scan(const ScenarioConfig& cfg);

// One curve per chirp rate (units of u); x is the pulse area in units of pi,
// swept by scaling the omega2 peak.
std::vector<SweepResult> run_area_scan(const ScenarioConfig& cfg, std::span<const double> chirp_rates_u);

struct ChirpSummaryRow {
    double chirp_rate_u = 0.0;
    double peak_position = 0.0;
    double peak_value = 0.0;
    double width80 = 0.0;
    double g2_near_peak = 0.0;
    double x_near_peak = 0.0;
    double robustness = 0.0;  // width80 / width80(alpha = 0)
    double secondary_minimum = 0.0;
    bool edge_peak = false;
    bool plateau = false;
};

struct ChirpSummary {
    std::vector<ChirpSummaryRow> rows;
    Provenance provenance;
};

ChirpSummary run_chirp_summary(const std::vector<SweepResult>& area_results);

struct DetuningScan {
    SweepResult chirped;
    SweepResult pi_pulse;
    double chirped_area_pi = 0.0;  // optimized at the nominal delta1
    double pi_pulse_area_pi = 0.0;
    double width_ratio = 0.0;      // chirped / pi-pulse width80 of the fits
    bool chirped_slower_falloff_right = false;  // sigma_right > sigma_left
};

// x is delta1 / 2pi in MHz. Pulse areas are optimized at the configured delta1.
DetuningScan run_detuning_scan(const ScenarioConfig& cfg);

}  // namespace rydarp
