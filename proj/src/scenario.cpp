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

#include "rydarp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rydarp/config.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/parallel.hpp"
#include "rydarp/units.hpp"

namespace rydarp {

namespace {

using units::mhz_to_angular;
using units::ns_to_us;

constexpr double pi = 3.14159265358979323846;

void require(bool ok, const char* key, const char* message)
{
    if (!ok)
        throw ConfigError(key, message);
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

ShiftDistribution parse_kind(const std::string& kind)
{
    if (kind == "point")
        return ShiftDistribution::point;
    if (kind == "normal")
        return ShiftDistribution::normal;
    if (kind == "log_uniform")
        return ShiftDistribution::log_uniform;
    throw ConfigError("noise.blockade_kind", "expected point, normal or log_uniform, got '" + kind + "'");
}

double chirp_rate(const ScenarioConfig& cfg, double rate_u)
{
    return rate_u * units::mhz_per_us_to_angular(cfg.pulse.chirp_unit_mhz_per_us);
}

std::string chirp_label(double rate_u)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "alpha_%+gu", rate_u);
    return buf;
}

// Maximizes f on [lo, hi]: coarse grid, then golden section around the best
// grid point. The grid is evaluated on the configured workers.
double maximize(const ScenarioConfig& cfg, double lo, double hi, const std::function<double(double, std::size_t)>& f)
{
    constexpr int grid = 24;
    const std::vector<double> xs = linspace(lo, hi, grid);
    std::vector<double> ys(xs.size());
    parallel_for_index(xs.size(), cfg.workers, [&](std::size_t i) { ys[i] = f(xs[i], i); });
    const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());

    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    std::size_t index = xs.size();
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c, index++), fd = f(d, index++);
    while (b - a > 1e-4 * (hi - lo)) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c, index++);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d, index++);
        }
    }
    const double x = 0.5 * (a + b);
    return f(x, index) >= ys[best] ? x : xs[best];
}

void attach_peak(SweepResult& r, const FitResult& fit)
{
    r.fit = fit;
    r.peak = fit.degenerate ? peak_metrics(r.curve_data()) : peak_metrics(fit);
}

}  // namespace

void ScenarioConfig::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    require(finite(physics.omega1_mhz) && physics.omega1_mhz > 0.0, "physics.omega1_mhz", "must be positive");
    require(finite(physics.omega2_mhz) && physics.omega2_mhz > 0.0, "physics.omega2_mhz", "must be positive");
    require(finite(physics.delta1_mhz) && physics.delta1_mhz != 0.0, "physics.delta1_mhz", "must be nonzero");
    require(finite(physics.delta2_center_mhz) && physics.delta2_center_mhz != 0.0, "physics.delta2_center_mhz",
            "must be nonzero");
    require(finite(physics.n_atoms) && physics.n_atoms >= 1.0, "physics.n_atoms", "must be >= 1");
    require(finite(physics.gamma_e_mhz) && physics.gamma_e_mhz >= 0.0, "physics.gamma_e_mhz", "must be >= 0");
    require(finite(physics.gamma_r_mhz) && physics.gamma_r_mhz >= 0.0, "physics.gamma_r_mhz", "must be >= 0");

    require(pulse.duration_ns > 0.0, "pulse.duration_ns", "must be positive");
    require(pulse.omega1_fwhm_ns > 0.0, "pulse.omega1_fwhm_ns", "must be positive");
    require(pulse.omega1_edge_ns >= 0.0 && pulse.omega1_edge_ns <= pulse.omega1_fwhm_ns, "pulse.omega1_edge_ns",
            "must lie in [0, omega1_fwhm_ns]");
    require(0.5 * (pulse.omega1_fwhm_ns + pulse.omega1_edge_ns) <= 0.5 * pulse.duration_ns + 1e-9,
            "pulse.omega1_fwhm_ns", "795 nm pulse does not fit inside the duration");
    require(pulse.omega2_fwhm_ns > 0.0, "pulse.omega2_fwhm_ns", "must be positive");
    require(pulse.pi_pulse_fwhm_ns > 0.0, "pulse.pi_pulse_fwhm_ns", "must be positive");
    require(pulse.chirp_unit_mhz_per_us > 0.0, "pulse.chirp_unit_mhz_per_us", "must be positive");

    require(model.tier == "superatom" || model.tier == "ladder3" || model.tier == "full", "model.tier",
            "expected superatom, ladder3 or full");
    if (model.tier == "full")
        require(std::round(physics.n_atoms) <= max_full_ensemble_atoms, "physics.n_atoms",
                "full-ensemble tier supports at most 8 atoms");

    const ShiftDistribution kind = parse_kind(noise.blockade_kind);
    try {
        scenario_noise(*this, seed).validate();
    } catch (const DomainError& e) {
        throw ConfigError(kind == ShiftDistribution::point ? "noise.blockade_value_mhz" : "noise.blockade_kind",
                          e.what());
    }
    require(noise.trials >= 1, "noise.trials", "must be >= 1");
    try {
        retrieval.validate();
    } catch (const DomainError& e) {
        throw ConfigError("retrieval", e.what());
    }

    require(integrator.step_ns > 0.0, "integrator.step_ns", "must be positive");
    require(integrator.norm_tolerance > 0.0, "integrator.norm_tolerance", "must be positive");
    require(integrator.stride >= 1, "integrator.stride", "must be >= 1");

    require(rabi.duration_min_ns > 0.0 && rabi.duration_max_ns >= rabi.duration_min_ns, "rabi.duration_max_ns",
            "needs 0 < duration_min_ns <= duration_max_ns");
    require(rabi.points >= 1, "rabi.points", "must be >= 1");

    require(area.area_min_pi > 0.0 && area.area_max_pi >= area.area_min_pi, "area.area_max_pi",
            "needs 0 < area_min_pi <= area_max_pi");
    require(area.points >= 1, "area.points", "must be >= 1");
    require(!area.chirp_rates_u.empty(), "area.chirp_rates_u", "must not be empty");
    for (double a : area.chirp_rates_u)
        require(std::abs(a) <= 6.0, "area.chirp_rates_u", "chirp rates must lie in [-6, 6] u");

    require(detuning.delta1_max_mhz >= detuning.delta1_min_mhz, "detuning.delta1_max_mhz",
            "must be >= delta1_min_mhz");
    require(detuning.delta1_max_mhz < 0.0 || detuning.delta1_min_mhz > 0.0, "detuning.delta1_min_mhz",
            "detuning axis must not cross delta1 = 0");
    require(detuning.points >= 1, "detuning.points", "must be >= 1");
    require(std::abs(detuning.chirp_rate_u) <= 6.0, "detuning.chirp_rate_u", "must lie in [-6, 6]");
    require(detuning.area_search_min_pi > 0.0 && detuning.area_search_max_pi > detuning.area_search_min_pi,
            "detuning.area_search_max_pi", "needs 0 < area_search_min_pi < area_search_max_pi");
    require(workers >= 1, "run.workers", "must be >= 1");
}

ModelSpec scenario_model(const ScenarioConfig& cfg)
{
    const double omega1 = mhz_to_angular(cfg.physics.omega1_mhz);
    const double omega2 = mhz_to_angular(cfg.physics.omega2_mhz);
    const double delta1 = mhz_to_angular(cfg.physics.delta1_mhz);
    const double delta2 = mhz_to_angular(cfg.physics.delta2_center_mhz);
    const double gamma_e = mhz_to_angular(cfg.physics.gamma_e_mhz);
    const double gamma_r = mhz_to_angular(cfg.physics.gamma_r_mhz);
    const double omega = omega1 * omega2 / (2.0 * delta1);

    if (cfg.model.tier == "ladder3")
        return Ladder3Model{{omega1, omega2, delta1, delta2, gamma_e, gamma_r}, true};
    if (cfg.model.tier == "full") {
        const NoiseSpec noise = scenario_noise(cfg, cfg.seed);
        return FullEnsembleModel{FullEnsembleParams::uniform(static_cast<int>(std::round(cfg.physics.n_atoms)), omega,
                                                             delta1 + delta2, noise.blockade.value)};
    }
    SuperatomModel m;
    m.params = {cfg.physics.n_atoms, omega, delta1 + delta2, scenario_noise(cfg, cfg.seed).blockade.value,
                cfg.model.include_double};
    m.gamma_e = gamma_e;
    m.gamma_r = gamma_r;
    m.intermediate_decay = cfg.model.intermediate_decay;
    m.light_shift = cfg.model.light_shift;
    return m;
}

NoiseSpec scenario_noise(const ScenarioConfig& cfg, std::uint64_t seed)
{
    const auto& n = cfg.noise;
    NoiseSpec spec;
    spec.mean_atoms = cfg.physics.n_atoms;
    spec.poisson_atoms = n.poisson_atoms;
    spec.blockade.kind = parse_kind(n.blockade_kind);
    spec.blockade.value = mhz_to_angular(n.blockade_value_mhz);
    spec.blockade.mean = mhz_to_angular(n.blockade_mean_mhz);
    spec.blockade.stddev = mhz_to_angular(n.blockade_stddev_mhz);
    spec.blockade.lower = mhz_to_angular(n.blockade_lower_mhz);
    spec.blockade.upper = mhz_to_angular(n.blockade_upper_mhz);
    spec.seed = seed;
    return spec;
}

IntegratorOptions scenario_integrator(const ScenarioConfig& cfg)
{
    return {ns_to_us(cfg.integrator.step_ns), cfg.integrator.norm_tolerance, cfg.integrator.stride};
}

PulseSchedule excitation_schedule(const ScenarioConfig& cfg, double omega2_peak, double rate, double delta1,
                                  double omega2_fwhm_us)
{
    const double duration = ns_to_us(cfg.pulse.duration_ns);
    const double center = 0.5 * duration;
    PulseSchedule s;
    s.omega1_shape = PulseShape::smoothed_square(mhz_to_angular(cfg.physics.omega1_mhz), center,
                                                 ns_to_us(cfg.pulse.omega1_fwhm_ns), ns_to_us(cfg.pulse.omega1_edge_ns));
    s.omega2_shape = PulseShape::gaussian(omega2_peak, center, omega2_fwhm_us);
    s.delta1 = delta1;
    s.chirp = {mhz_to_angular(cfg.physics.delta2_center_mhz), rate, 0.0, duration};
    s.duration = duration;
    return s;
}

double area_per_omega2(const ScenarioConfig& cfg, double delta1, double omega2_fwhm_us)
{
    const PulseSchedule s = excitation_schedule(cfg, 1.0, 0.0, delta1, omega2_fwhm_us);
    return pulse_area(s, cfg.physics.n_atoms, ns_to_us(cfg.integrator.step_ns));
}

SweepPoint simulate_point(const ScenarioConfig& cfg, const PulseSchedule& schedule, double x, std::size_t index)
{
    const ModelSpec model = scenario_model(cfg);
    const IntegratorOptions opts = scenario_integrator(cfg);

    SweepPoint point;
    point.x = x;
    std::vector<ExcitationDistribution> trials;
    if (std::holds_alternative<Ladder3Model>(model)) {
        point.distribution = evolve_from_ground(model, schedule, opts).final_distribution;
        trials.push_back(point.distribution);
    } else {
        const std::uint64_t seed = cfg.noise.common_random_numbers ? cfg.seed : derived_seed(cfg.seed, index);
        MonteCarloResult mc = run_monte_carlo(model, schedule, scenario_noise(cfg, seed), cfg.noise.trials, opts, 1);
        point.distribution = mc.pooled;
        trials = std::move(mc.per_trial);
    }

    const HbtProbabilities hbt = hbt_probabilities(point.distribution, cfg.retrieval);
    point.click_sum = hbt.click_sum;
    point.g2_measured = hbt.g2_measured;
    if (trials.size() > 1) {
        std::vector<double> clicks;
        clicks.reserve(trials.size());
        for (const auto& d : trials)
            clicks.push_back(hbt_probabilities(d, cfg.retrieval).click_sum);
        const double n = static_cast<double>(clicks.size());
        const double mean = std::accumulate(clicks.begin(), clicks.end(), 0.0) / n;
        double ss = 0.0;
        for (double c : clicks)
            ss += (c - mean) * (c - mean);
        point.click_sum_stderr = std::sqrt(ss / (n - 1.0) / n);
    }
    return point;
}

RabiScan run_rabi_scan(const ScenarioConfig& cfg)
{
    cfg.validate();
    const double omega1 = mhz_to_angular(cfg.physics.omega1_mhz);
    const double omega2 = mhz_to_angular(cfg.physics.omega2_mhz);
    const double delta1 = mhz_to_angular(cfg.physics.delta1_mhz);
    const double delta2 = mhz_to_angular(cfg.physics.delta2_center_mhz);

    const std::vector<double> axis =
        linspace(ns_to_us(cfg.rabi.duration_min_ns), ns_to_us(cfg.rabi.duration_max_ns), cfg.rabi.points);
    RabiScan scan;
    scan.sweep = sweep_execute(cfg, axis, [&](double tau, std::size_t i) {
        PulseSchedule s;
        s.omega1_shape = PulseShape::constant(omega1);
        s.omega2_shape = PulseShape::constant(omega2);
        s.delta1 = delta1;
        s.chirp = {delta2, 0.0, 0.0, tau};
        s.duration = tau;
        return simulate_point(cfg, s, tau, i);
    });
    scan.sweep.scenario = "rabi";
    scan.sweep.curve = "rabi";
    scan.sweep.x_label = "duration_us";
    attach_peak(scan.sweep, fit_damped_rabi(scan.sweep.curve_data()));

    const double omega = std::abs(omega1 * omega2 / (2.0 * delta1));
    scan.omega_n_input = std::sqrt(cfg.physics.n_atoms) * omega;
    scan.omega_n_fit = std::abs(scan.sweep.fit->params[3]);
    scan.atom_number = estimate_atom_number(scan.omega_n_fit, omega);
    return scan;
}

std::vector<SweepResult> run_area_scan(const ScenarioConfig& cfg, std::span<const double> chirp_rates_u)
{
    cfg.validate();
    if (chirp_rates_u.empty())
        throw DomainError("area scan needs at least one chirp rate");
    const double delta1 = mhz_to_angular(cfg.physics.delta1_mhz);
    const double fwhm = ns_to_us(cfg.pulse.omega2_fwhm_ns);
    const double per_omega2 = area_per_omega2(cfg, delta1, fwhm);
    const std::vector<double> axis = linspace(cfg.area.area_min_pi, cfg.area.area_max_pi, cfg.area.points);

    std::vector<SweepResult> out;
    for (double rate_u : chirp_rates_u) {
        if (std::abs(rate_u) > 6.0)
            throw DomainError("chirp rates must lie in [-6, 6] u");
        const double rate = chirp_rate(cfg, rate_u);
        SweepResult r = sweep_execute(cfg, axis, [&](double area_pi, std::size_t i) {
            const double omega2_peak = area_pi * pi / per_omega2;
            return simulate_point(cfg, excitation_schedule(cfg, omega2_peak, rate, delta1, fwhm), area_pi, i);
        });
        r.scenario = "area-scan";
        r.curve = chirp_label(rate_u);
        r.x_label = "area_pi";
        r.parameter = rate_u;
        attach_peak(r, fit_damped_rabi(r.curve_data()));
        out.push_back(std::move(r));
    }
    return out;
}

ChirpSummary run_chirp_summary(const std::vector<SweepResult>& area_results)
{
    if (area_results.size() < 2)
        throw DomainError("chirp summary needs at least two chirp rates");
    const auto zero = std::find_if(area_results.begin(), area_results.end(),
                                   [](const SweepResult& r) { return r.parameter == 0.0; });
    if (zero == area_results.end())
        throw DomainError("chirp summary needs the zero chirp rate as reference");
    if (!zero->peak)
        throw DomainError("area scan results carry no peak metrics");

    ChirpSummary summary;
    summary.provenance = zero->provenance;
    for (const SweepResult& r : area_results) {
        if (!r.peak || r.points.empty())
            throw DomainError("area scan results carry no peak metrics");
        ChirpSummaryRow row;
        row.chirp_rate_u = r.parameter;
        row.peak_position = r.peak->position;
        row.peak_value = r.peak->value;
        row.width80 = r.peak->width80;
        row.secondary_minimum = r.peak->secondary_minimum;
        row.edge_peak = r.peak->edge_peak;
        row.plateau = r.peak->plateau;
        const auto nearest = std::min_element(r.points.begin(), r.points.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.x - row.peak_position) < std::abs(b.x - row.peak_position);
        });
        row.x_near_peak = nearest->x;
        row.g2_near_peak = nearest->g2_measured;
        row.robustness = robustness_ratio(row.width80, zero->peak->width80);
        summary.rows.push_back(row);
    }
    std::sort(summary.rows.begin(), summary.rows.end(),
              [](const auto& a, const auto& b) { return a.chirp_rate_u < b.chirp_rate_u; });
    return summary;
}

DetuningScan run_detuning_scan(const ScenarioConfig& cfg)
{
    cfg.validate();
    const double delta1 = mhz_to_angular(cfg.physics.delta1_mhz);
    const std::vector<double> axis =
        linspace(cfg.detuning.delta1_min_mhz, cfg.detuning.delta1_max_mhz, cfg.detuning.points);

    struct Scheme {
        const char* name;
        double rate;
        double fwhm;
    };
    const Scheme schemes[2] = {{"chirped", chirp_rate(cfg, cfg.detuning.chirp_rate_u), ns_to_us(cfg.pulse.omega2_fwhm_ns)},
                               {"pi_pulse", 0.0, ns_to_us(cfg.pulse.pi_pulse_fwhm_ns)}};

    DetuningScan scan;
    for (const Scheme& sc : schemes) {
        const double per_omega2 = area_per_omega2(cfg, delta1, sc.fwhm);
        const double area_pi = maximize(cfg, cfg.detuning.area_search_min_pi, cfg.detuning.area_search_max_pi,
                                        [&](double a, std::size_t i) {
                                            const PulseSchedule s =
                                                excitation_schedule(cfg, a * pi / per_omega2, sc.rate, delta1, sc.fwhm);
                                            return simulate_point(cfg, s, a, i).click_sum;
                                        });
        const double omega2_peak = area_pi * pi / per_omega2;
        SweepResult r = sweep_execute(cfg, axis, [&](double d1_mhz, std::size_t i) {
            const PulseSchedule s = excitation_schedule(cfg, omega2_peak, sc.rate, mhz_to_angular(d1_mhz), sc.fwhm);
            return simulate_point(cfg, s, d1_mhz, i);
        });
        r.scenario = "detuning-scan";
        r.curve = sc.name;
        r.x_label = "delta1_mhz";
        r.parameter = sc.rate == 0.0 ? 0.0 : cfg.detuning.chirp_rate_u;
        attach_peak(r, fit_asymmetric_gaussian(r.curve_data()));
        if (sc.rate == 0.0) {
            scan.pi_pulse = std::move(r);
            scan.pi_pulse_area_pi = area_pi;
        } else {
            scan.chirped = std::move(r);
            scan.chirped_area_pi = area_pi;
        }
    }
    scan.width_ratio = robustness_ratio(scan.chirped.peak->width80, scan.pi_pulse.peak->width80);
    const auto& p = scan.chirped.fit->params;
    scan.chirped_slower_falloff_right = p[3] > p[2];
    return scan;
}

}  // namespace rydarp
