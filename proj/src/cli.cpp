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

#include "rydarp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include "rydarp/config.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/output.hpp"
#include "rydarp/units.hpp"

namespace rydarp {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::vector<std::string> configs;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;

    ScenarioConfig load() const
    {
        std::vector<std::string> all = overrides;
        if (seed)
            all.push_back("run.seed=" + std::to_string(*seed));
        if (workers)
            all.push_back("run.workers=" + std::to_string(*workers));
        return load_config(configs, all);
    }

    fs::path dir() const
    {
        if (!out_dir.empty())
            return out_dir;
        if (const char* env = std::getenv(out_dir_env); env && *env)
            return env;
        return "out";
    }
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("-c,--config", c.configs, "JSON config file; later files override earlier ones")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", c.overrides, "Override a config value, e.g. --set physics.n_atoms=150");
    cmd->add_option("-o,--out", c.out_dir, std::string("Output directory (default: $") + out_dir_env + " or ./out)");
    cmd->add_option("--seed", c.seed, "Override run.seed");
    cmd->add_option("--workers", c.workers, "Override run.workers")->check(CLI::PositiveNumber);
}

void write_outputs(const fs::path& dir, const std::string& stem, const std::string& csv, const Json& summary)
{
    write_text(dir / (stem + ".csv"), csv);
    write_text(dir / (stem + ".summary.json"), summary.dump(2) + "\n");
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

int run_rabi(const Common& c, std::ostream& out)
{
    const ScenarioConfig cfg = c.load();
    const RabiScan scan = run_rabi_scan(cfg);
    write_outputs(c.dir(), "rabi", sweep_csv({scan.sweep}), rabi_summary_json(scan));
    emit_plot_data({scan.sweep}, c.dir(), "rabi");
    out << "Omega_N/2pi input " << fmt(scan.omega_n_input / units::two_pi) << " MHz, fitted "
        << fmt(scan.omega_n_fit / units::two_pi) << " MHz, N estimate " << fmt(scan.atom_number) << '\n';
    return exit_ok;
}

std::vector<double> rates_or_default(const std::vector<double>& rates, const ScenarioConfig& cfg)
{
    return rates.empty() ? cfg.area.chirp_rates_u : rates;
}

int run_area(const Common& c, const std::vector<double>& rates, std::ostream& out)
{
    const ScenarioConfig cfg = c.load();
    const auto sweeps = run_area_scan(cfg, rates_or_default(rates, cfg));
    write_outputs(c.dir(), "area-scan", sweep_csv(sweeps), area_summary_json(sweeps));
    emit_plot_data(sweeps, c.dir(), "area-scan");
    for (const SweepResult& s : sweeps)
        out << s.curve << ": peak " << fmt(s.peak->value) << " at " << fmt(s.peak->position) << " pi, width80 "
            << fmt(s.peak->width80) << " pi\n";
    return exit_ok;
}

int run_summary(const Common& c, const std::vector<double>& rates, std::ostream& out)
{
    const ScenarioConfig cfg = c.load();
    const auto sweeps = run_area_scan(cfg, rates_or_default(rates, cfg));
    const ChirpSummary summary = run_chirp_summary(sweeps);
    write_outputs(c.dir(), "chirp-summary", chirp_summary_csv(summary), chirp_summary_json(summary));
    write_text(c.dir() / "chirp-summary.sweeps.csv", sweep_csv(sweeps));
    emit_plot_data(sweeps, c.dir(), "chirp-summary");
    out << chirp_summary_csv(summary);
    return exit_ok;
}

int run_detuning(const Common& c, std::ostream& out)
{
    const ScenarioConfig cfg = c.load();
    const DetuningScan scan = run_detuning_scan(cfg);
    write_outputs(c.dir(), "detuning-scan", sweep_csv({scan.chirped, scan.pi_pulse}), detuning_summary_json(scan));
    emit_plot_data({scan.chirped, scan.pi_pulse}, c.dir(), "detuning-scan");
    out << "width80 chirped " << fmt(scan.chirped.peak->width80) << " MHz, pi-pulse "
        << fmt(scan.pi_pulse.peak->width80) << " MHz, ratio " << fmt(scan.width_ratio) << ", slower falloff towards "
        << (scan.chirped_slower_falloff_right ? "smaller" : "larger") << " |delta1|\n";
    return exit_ok;
}

int run_adiabaticity(const Common& c, double area_pi, double rate_u, std::ostream& out)
{
    const ScenarioConfig cfg = c.load();
    const double delta1 = units::mhz_to_angular(cfg.physics.delta1_mhz);
    const double fwhm = units::ns_to_us(cfg.pulse.omega2_fwhm_ns);
    const double step = units::ns_to_us(cfg.integrator.step_ns);
    const double omega2_peak = area_pi * M_PI / area_per_omega2(cfg, delta1, fwhm);
    const PulseSchedule s = excitation_schedule(
        cfg, omega2_peak, rate_u * units::mhz_per_us_to_angular(cfg.pulse.chirp_unit_mhz_per_us), delta1, fwhm);

    const auto n = static_cast<std::size_t>(std::llround(s.duration / step)) + 1;
    std::vector<double> t(n), om(n), de(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = std::min(s.duration, static_cast<double>(i) * step);
        const CollectiveDrive d = effective_rabi_and_delta(s, cfg.physics.n_atoms, t[i]);
        om[i] = d.omega_n;
        de[i] = d.delta;
    }
    const std::vector<double> r = adiabaticity_ratio(om, de, step);

    std::ostringstream csv;
    csv.precision(12);
    csv << "t_us,omega_n_mhz,delta_mhz,adiabaticity\n";
    double peak = 0.0, peak_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        csv << t[i] << ',' << om[i] / units::two_pi << ',' << de[i] / units::two_pi << ',' << r[i] << '\n';
        if (std::abs(om[i]) > 1e-3 * std::abs(omega2_peak) && r[i] > peak) {
            peak = r[i];
            peak_t = t[i];
        }
    }
    const Json summary = {{"scenario", "adiabaticity"},
                          {"area_pi", area_pi},
                          {"chirp_rate_u", rate_u},
                          {"pulse_area_pi", pulse_area(om, step) / M_PI},
                          {"max_ratio_in_pulse", peak},
                          {"max_ratio_time_us", peak_t},
                          {"provenance", provenance_json(make_provenance(cfg))}};
    write_outputs(c.dir(), "adiabaticity", csv.str(), summary);
    out << "max adiabaticity ratio " << fmt(peak) << " at t = " << fmt(peak_t) << " us\n";
    return exit_ok;
}

int run_fit(const std::string& input, const std::string& model, const std::string& out_dir, std::ostream& out)
{
    const ScanCurve curve = read_curve_csv(input);
    FitResult fit;
    if (model == "damped-rabi")
        fit = fit_damped_rabi(curve);
    else if (model == "asymmetric-gaussian")
        fit = fit_asymmetric_gaussian(curve);
    else
        throw ConfigError("--model", "expected damped-rabi or asymmetric-gaussian, got '" + model + "'");
    const PeakMetrics peak = fit.degenerate ? peak_metrics(curve) : peak_metrics(fit);

    static const char* rabi_names[] = {"a", "b", "c", "d"};
    static const char* gauss_names[] = {"h", "x0", "sigma_left", "sigma_right"};
    const char** names = fit.model == FitModel::damped_rabi ? rabi_names : gauss_names;
    for (std::size_t i = 0; i < fit.params.size(); ++i)
        out << names[i] << " = " << fmt(fit.params[i]) << '\n';
    out << "width80 = " << fmt(peak.width80) << '\n'
        << "peak = " << fmt(peak.value) << " at " << fmt(peak.position) << '\n'
        << "converged = " << (fit.converged ? "true" : "false") << '\n';
    if (!out_dir.empty())
        write_text(fs::path(out_dir) / "fit.summary.json",
                   Json({{"input", fs::path(input).filename().string()}, {"fit", fit_json(fit)}, {"peak", peak_json(peak)}})
                           .dump(2) +
                       "\n");
    return exit_ok;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Chirped single-excitation simulator for blockaded Rydberg ensembles", "rydarp"};
    app.require_subcommand(1);

    Common common;
    std::vector<double> rates;
    double area_pi = 1.65;
    double rate_u = 4.0;
    std::string fit_input, fit_model = "damped-rabi", fit_out;

    auto* rabi = app.add_subcommand("rabi", "Collective Rabi oscillation versus pulse duration");
    add_common(rabi, common);
    auto* area = app.add_subcommand("area-scan", "Excitation versus pulse area for a set of chirp rates");
    add_common(area, common);
    area->add_option("--rates", rates, "Comma-separated chirp rates in units of u (default: area.chirp_rates_u)")->delimiter(',');
    auto* summary = app.add_subcommand("chirp-summary", "Peak position, value, width and g2 per chirp rate");
    add_common(summary, common);
    summary->add_option("--rates", rates, "Comma-separated chirp rates in units of u (default: area.chirp_rates_u)")->delimiter(',');
    auto* detuning = app.add_subcommand("detuning-scan", "Chirped versus pi-pulse robustness against delta1");
    add_common(detuning, common);
    auto* adiabatic = app.add_subcommand("adiabaticity", "Adiabaticity ratio trace of one excitation pulse");
    add_common(adiabatic, common);
    adiabatic->add_option("--area", area_pi, "Pulse area in units of pi")->capture_default_str();
    adiabatic->add_option("--rate", rate_u, "Chirp rate in units of u")->capture_default_str();
    auto* fit = app.add_subcommand("fit", "Fit a measured or simulated scan curve");
    fit->add_option("-i,--input", fit_input, "CSV with columns x,y[,sigma]")->required()->check(CLI::ExistingFile);
    fit->add_option("-m,--model", fit_model, "damped-rabi | asymmetric-gaussian")->capture_default_str();
    fit->add_option("-o,--out", fit_out, "Directory for fit.summary.json");
    auto* version = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "rydarp: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (*version) {
            out << code_version() << '\n';
            return exit_ok;
        }
        if (*rabi)
            return run_rabi(common, out);
        if (*area)
            return run_area(common, rates, out);
        if (*summary)
            return run_summary(common, rates, out);
        if (*detuning)
            return run_detuning(common, out);
        if (*adiabatic)
            return run_adiabaticity(common, area_pi, rate_u, out);
        if (*fit)
            return run_fit(fit_input, fit_model, fit_out, out);
    } catch (const ConfigError& e) {
        err << "rydarp: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericFailure& e) {
        err << "rydarp: numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const IoError& e) {
        err << "rydarp: I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const DomainError& e) {
        err << "rydarp: invalid input: " << e.what() << '\n';
        return exit_config;
    }
    return exit_config;
}

}  // namespace rydarp
