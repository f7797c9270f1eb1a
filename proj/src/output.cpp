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

#include "rydarp/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string sweep_csv(const std::vector<SweepResult>& sweeps)
{
    std::ostringstream out;
    out << sweep_csv_header << '\n';
    for (const SweepResult& s : sweeps)
        for (const SweepPoint& p : s.points) {
            out << s.scenario << ',' << s.curve << ',' << num(s.parameter) << ',' << s.x_label << ',' << num(p.x)
                << ',' << num(p.click_sum) << ',' << num(p.click_sum_stderr) << ',' << num(p.g2_measured);
            for (double q : p.distribution.p)
                out << ',' << num(q);
            out << '\n';
        }
    return out.str();
}

Json provenance_json(const Provenance& p)
{
    return {{"config_hash", p.config_hash}, {"seed", p.seed}, {"code_version", p.code_version}};
}

Json fit_json(const FitResult& fit)
{
    Json params = Json::array();
    for (double v : fit.params)
        params.push_back(number_or_null(v));
    Json stderr_ = Json::array();
    for (Eigen::Index i = 0; i < fit.covariance.rows(); ++i)
        stderr_.push_back(number_or_null(std::sqrt(std::max(0.0, fit.covariance(i, i)))));
    return {{"model", to_string(fit.model)},
            {"params", params},
            {"param_stderr", stderr_},
            {"residual_norm", number_or_null(fit.residual_norm)},
            {"gradient_norm", number_or_null(fit.gradient_norm)},
            {"converged", fit.converged},
            {"degenerate", fit.degenerate},
            {"iterations", fit.iterations},
            {"x_min", fit.x_min},
            {"x_max", fit.x_max}};
}

Json peak_json(const PeakMetrics& p)
{
    return {{"position", number_or_null(p.position)},
            {"value", number_or_null(p.value)},
            {"width80", number_or_null(p.width80)},
            {"left", number_or_null(p.left)},
            {"right", number_or_null(p.right)},
            {"secondary_minimum", number_or_null(p.secondary_minimum)},
            {"edge_peak", p.edge_peak},
            {"plateau", p.plateau}};
}

Json sweep_summary_json(const SweepResult& s)
{
    Json j = {{"scenario", s.scenario},
              {"curve", s.curve},
              {"parameter", s.parameter},
              {"x_label", s.x_label},
              {"points", s.points.size()},
              {"provenance", provenance_json(s.provenance)}};
    j["fit"] = s.fit ? fit_json(*s.fit) : Json(nullptr);
    j["peak"] = s.peak ? peak_json(*s.peak) : Json(nullptr);
    return j;
}

Json rabi_summary_json(const RabiScan& scan)
{
    Json j = sweep_summary_json(scan.sweep);
    j["omega_n_input_mhz"] = scan.omega_n_input / (2.0 * M_PI);
    j["omega_n_fit_mhz"] = scan.omega_n_fit / (2.0 * M_PI);
    j["atom_number"] = number_or_null(scan.atom_number);
    return j;
}

Json area_summary_json(const std::vector<SweepResult>& sweeps)
{
    Json curves = Json::array();
    for (const SweepResult& s : sweeps)
        curves.push_back(sweep_summary_json(s));
    Json j = {{"scenario", "area-scan"}, {"curves", curves}};
    if (!sweeps.empty())
        j["provenance"] = provenance_json(sweeps.front().provenance);
    return j;
}

Json chirp_summary_json(const ChirpSummary& summary)
{
    Json rows = Json::array();
    for (const ChirpSummaryRow& r : summary.rows)
        rows.push_back({{"chirp_rate_u", r.chirp_rate_u},
                        {"peak_position_pi", number_or_null(r.peak_position)},
                        {"peak_value", number_or_null(r.peak_value)},
                        {"width80_pi", number_or_null(r.width80)},
                        {"robustness", number_or_null(r.robustness)},
                        {"x_near_peak_pi", r.x_near_peak},
                        {"g2_near_peak", number_or_null(r.g2_near_peak)},
                        {"secondary_minimum", number_or_null(r.secondary_minimum)},
                        {"edge_peak", r.edge_peak},
                        {"plateau", r.plateau}});
    return {{"scenario", "chirp-summary"}, {"rows", rows}, {"provenance", provenance_json(summary.provenance)}};
}

std::string chirp_summary_csv(const ChirpSummary& summary)
{
    std::ostringstream out;
    out << "chirp_rate_u,peak_position_pi,peak_value,width80_pi,robustness,x_near_peak_pi,g2_near_peak,"
           "secondary_minimum,edge_peak,plateau\n";
    for (const ChirpSummaryRow& r : summary.rows)
        out << num(r.chirp_rate_u) << ',' << num(r.peak_position) << ',' << num(r.peak_value) << ','
            << num(r.width80) << ',' << num(r.robustness) << ',' << num(r.x_near_peak) << ','
            << num(r.g2_near_peak) << ',' << num(r.secondary_minimum) << ',' << (r.edge_peak ? 1 : 0) << ',' << (r.plateau ? 1 : 0) << '\n';
    return out.str();
}

Json detuning_summary_json(const DetuningScan& scan)
{
    return {{"scenario", "detuning-scan"},
            {"chirped", sweep_summary_json(scan.chirped)},
            {"pi_pulse", sweep_summary_json(scan.pi_pulse)},
            {"chirped_area_pi", scan.chirped_area_pi},
            {"pi_pulse_area_pi", scan.pi_pulse_area_pi},
            {"width_ratio", number_or_null(scan.width_ratio)},
            {"chirped_slower_falloff_right", scan.chirped_slower_falloff_right},
            {"provenance", provenance_json(scan.chirped.provenance)}};
}

void write_text(const std::filesystem::path& path, const std::string& body)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.close();
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> emit_plot_data(const std::vector<SweepResult>& sweeps,
                                                  const std::filesystem::path& dir, const std::string& stem)
{
    if (sweeps.empty())
        throw ConfigError("sweep", "refusing to emit plot data for an empty result");
    for (const SweepResult& s : sweeps)
        if (s.points.empty())
            throw ConfigError("sweep", "refusing to emit plot data for an empty curve '" + s.curve + "'");

    std::vector<std::filesystem::path> files;
    Json manifest = {{"scenario", sweeps.front().scenario},
                     {"provenance", provenance_json(sweeps.front().provenance)},
                     {"files", Json::array()}};
    for (const SweepResult& s : sweeps) {
        std::ostringstream body;
        body << "# scenario: " << s.scenario << "\n# curve: " << s.curve << "\n# parameter: " << num(s.parameter)
             << "\n# config_hash: " << s.provenance.config_hash << "\n# seed: " << s.provenance.seed
             << "\n# code_version: " << s.provenance.code_version << "\n# columns: " << s.x_label
             << " click_sum click_sum_stderr\n";
        for (const SweepPoint& p : s.points)
            body << num(p.x) << ' ' << num(p.click_sum) << ' ' << num(p.click_sum_stderr) << '\n';
        const std::filesystem::path file = dir / (stem + "." + s.curve + ".dat");
        write_text(file, body.str());
        files.push_back(file);
        manifest["files"].push_back({{"curve", s.curve}, {"parameter", s.parameter}, {"path", file.filename().string()}});
    }
    write_text(dir / (stem + ".manifest.json"), manifest.dump(2) + "\n");
    return files;
}

ScanCurve read_curve_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    ScanCurve c;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#')
            continue;
        for (char& ch : line)
            if (ch == ',' || ch == '\t' || ch == ';')
                ch = ' ';
        std::istringstream fields(line);
        std::vector<double> v;
        std::string tok;
        bool numeric = true;
        while (fields >> tok) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(tok, &used));
                numeric = numeric && used == tok.size();
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (v.empty() && !numeric && c.x.empty())
            continue;
        if (!numeric && c.x.empty())
            continue;  // header row
        if (!numeric || v.size() < 2 || v.size() > 3)
            throw ConfigError(path.string(), "line " + std::to_string(row) + " is not x,y[,sigma]");
        c.x.push_back(v[0]);
        c.y.push_back(v[1]);
        if (v.size() == 3)
            c.sigma.push_back(v[2]);
    }
    if (!c.sigma.empty() && c.sigma.size() != c.x.size())
        throw ConfigError(path.string(), "sigma column present on some rows only");
    return c;
}

}  // namespace rydarp
