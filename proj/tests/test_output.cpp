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


#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rydarp/errors.hpp"
#include "rydarp/output.hpp"

using namespace rydarp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("rydarp_test_output_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SweepResult sample_sweep(const std::string& curve, double parameter)
{
    SweepResult s;
    s.scenario = "area-scan";
    s.curve = curve;
    s.x_label = "area_pi";
    s.parameter = parameter;
    s.provenance = {"abc123", 7, "1.0.0"};
    for (int i = 0; i < 3; ++i) {
        SweepPoint p;
        p.x = 0.5 * (i + 1);
        p.click_sum = 0.1 * (i + 1);
        p.click_sum_stderr = 0.01;
        p.g2_measured = i == 0 ? std::numeric_limits<double>::quiet_NaN() : 0.05;
        p.distribution = ExcitationDistribution::from({0.7, 0.3, 0.0, 0.0});
        s.points.push_back(p);
    }
    return s;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("sweep CSV has the frozen header and one row per point")
{
    const std::string csv = sweep_csv({sample_sweep("rate_0u", 0.0), sample_sweep("rate_4u", 4.0)});
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == sweep_csv_header);
    CHECK(rows[1] == "area-scan,rate_0u,0,area_pi,0.5,0.1,0.01,nan,0.7,0.3,0,0");
    CHECK(rows[6].rfind("area-scan,rate_4u,4,area_pi,1.5,", 0) == 0);
}

TEST_CASE("non-finite values become JSON null")
{
    PeakMetrics p;
    p.value = 0.2;
    p.position = 1.0;
    p.width80 = std::numeric_limits<double>::infinity();
    const Json j = peak_json(p);
    CHECK(j["value"] == 0.2);
    CHECK(j["width80"].is_null());
    CHECK(j["secondary_minimum"].is_null());

    const Json s = sweep_summary_json(sample_sweep("c", 1.0));
    CHECK(s["fit"].is_null());
    CHECK(s["points"] == 3);
    CHECK(s["provenance"]["config_hash"] == "abc123");
    CHECK(s["provenance"]["seed"] == 7);
}

TEST_CASE("plot data: one file per curve plus a manifest")
{
    const fs::path dir = scratch("plot");
    const auto files = emit_plot_data({sample_sweep("rate_0u", 0.0), sample_sweep("rate_4u", 4.0)}, dir, "area-scan");
    REQUIRE(files.size() == 2);
    CHECK(files[0].filename() == "area-scan.rate_0u.dat");
    CHECK(fs::exists(files[1]));

    const std::string body = read_text(files[1]);
    CHECK(body.find("# config_hash: abc123\n") != std::string::npos);
    CHECK(body.find("# parameter: 4\n") != std::string::npos);
    CHECK(body.find("# columns: area_pi click_sum click_sum_stderr\n") != std::string::npos);
    CHECK(body.find("\n1.5 0.3 0.01\n") != std::string::npos);

    const Json manifest = Json::parse(read_text(dir / "area-scan.manifest.json"));
    CHECK(manifest["scenario"] == "area-scan");
    REQUIRE(manifest["files"].size() == 2);
    CHECK(manifest["files"][1]["path"] == "area-scan.rate_4u.dat");
    CHECK(manifest["files"][1]["parameter"] == 4.0);
    fs::remove_all(dir);
}

TEST_CASE("plot data refuses empty input")
{
    const fs::path dir = scratch("empty");
    CHECK_THROWS_AS(emit_plot_data({}, dir, "x"), ConfigError);
    SweepResult empty = sample_sweep("c", 0.0);
    empty.points.clear();
    CHECK_THROWS_AS(emit_plot_data({empty}, dir, "x"), ConfigError);
    CHECK(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST_CASE("curve CSV reader")
{
    const fs::path dir = scratch("read");
    write_text(dir / "a.csv", "# measured\nx,y\n0.1,0.2\n0.2,0.4\n\n0.3,0.5\n");
    const ScanCurve a = read_curve_csv(dir / "a.csv");
    CHECK(a.x == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(a.y == std::vector<double>{0.2, 0.4, 0.5});
    CHECK(a.sigma.empty());

    write_text(dir / "b.csv", "x\ty\tsigma\n1\t2\t0.1\n2\t3\t0.2\n");
    const ScanCurve b = read_curve_csv(dir / "b.csv");
    CHECK(b.sigma == std::vector<double>{0.1, 0.2});

    write_text(dir / "c.csv", "1,2\n2,abc\n");
    CHECK_THROWS_AS(read_curve_csv(dir / "c.csv"), ConfigError);
    write_text(dir / "d.csv", "1,2,3,4\n");
    CHECK_THROWS_AS(read_curve_csv(dir / "d.csv"), ConfigError);
    write_text(dir / "e.csv", "1,2,0.1\n2,3\n");
    CHECK_THROWS_AS(read_curve_csv(dir / "e.csv"), ConfigError);
    CHECK_THROWS_AS(read_curve_csv(dir / "missing.csv"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("plot data round trips through the curve reader")
{
    const fs::path dir = scratch("roundtrip");
    const auto files = emit_plot_data({sample_sweep("c", 0.0)}, dir, "s");
    const ScanCurve c = read_curve_csv(files[0]);
    CHECK(c.x == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(c.sigma.size() == 3);
    fs::remove_all(dir);
}
