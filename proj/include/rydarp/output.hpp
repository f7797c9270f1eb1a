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

#include <filesystem>
#include <string>
#include <vector>

#include "rydarp/config.hpp"
#include "rydarp/scenario.hpp"

namespace rydarp {

// Frozen column order, see FORMATS.md.
inline constexpr const char* sweep_csv_header =
    "scenario,curve,parameter,x_label,x,click_sum,click_sum_stderr,g2_measured,p0,p1,p2,p3";

std::string sweep_csv(const std::vector<SweepResult>& sweeps);

Json provenance_json(const Provenance& p);
Json fit_json(const FitResult& fit);
Json peak_json(const PeakMetrics& peak);
Json sweep_summary_json(const SweepResult& sweep);

Json rabi_summary_json(const RabiScan& scan);
Json area_summary_json(const std::vector<SweepResult>& sweeps);
Json chirp_summary_json(const ChirpSummary& summary);
std::string chirp_summary_csv(const ChirpSummary& summary);
Json detuning_summary_json(const DetuningScan& scan);

void write_text(const std::filesystem::path& path, const std::string& body);
std::string read_text(const std::filesystem::path& path);

// One "<stem>.<curve>.dat" file per curve with x, y, yerr columns and a
// '#' header carrying the scenario and config hash, plus
// "<stem>.manifest.json". Returns the data file paths.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<SweepResult>& sweeps,
                                                  const std::filesystem::path& dir, const std::string& stem);

// Reads a two- or three-column numeric CSV (x, y[, sigma]); lines starting
// with '#' and a non-numeric header row are skipped.
ScanCurve read_curve_csv(const std::filesystem::path& path);

}  // namespace rydarp
