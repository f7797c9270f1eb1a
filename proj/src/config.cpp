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

#include "rydarp/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

bool compatible(const Json& expected, const Json& given)
{
    if (expected.is_number_unsigned())
        return given.is_number_unsigned() || (given.is_number_integer() && given.get<std::int64_t>() >= 0);
    if (expected.is_number_integer())
        return given.is_number_integer();
    if (expected.is_number())
        return given.is_number();
    if (expected.is_boolean())
        return given.is_boolean();
    if (expected.is_string())
        return given.is_string();
    if (expected.is_array())
        return given.is_array() && std::all_of(given.begin(), given.end(), [](const Json& v) { return v.is_number(); });
    if (expected.is_object())
        return given.is_object();
    return false;
}

std::string type_label(const Json& v)
{
    if (v.is_number_unsigned())
        return "non-negative integer";
    if (v.is_number_integer())
        return "integer";
    if (v.is_array())
        return "array of numbers";
    return v.type_name();
}

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

template <class T>
T get(const Json& j, const char* section, const char* key)
{
    try {
        return j.at(section).at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string(section) + "." + key, e.what());
    }
}

}  // namespace

Json to_json(const ScenarioConfig& c)
{
    Json j;
    j["physics"] = {{"omega1_mhz", c.physics.omega1_mhz},
                    {"omega2_mhz", c.physics.omega2_mhz},
                    {"delta1_mhz", c.physics.delta1_mhz},
                    {"delta2_center_mhz", c.physics.delta2_center_mhz},
                    {"n_atoms", c.physics.n_atoms},
                    {"gamma_e_mhz", c.physics.gamma_e_mhz},
                    {"gamma_r_mhz", c.physics.gamma_r_mhz}};
    j["pulse"] = {{"duration_ns", c.pulse.duration_ns},
                  {"omega1_fwhm_ns", c.pulse.omega1_fwhm_ns},
                  {"omega1_edge_ns", c.pulse.omega1_edge_ns},
                  {"omega2_fwhm_ns", c.pulse.omega2_fwhm_ns},
                  {"pi_pulse_fwhm_ns", c.pulse.pi_pulse_fwhm_ns},
                  {"chirp_unit_mhz_per_us", c.pulse.chirp_unit_mhz_per_us}};
    j["model"] = {{"tier", c.model.tier},
                  {"include_double", c.model.include_double},
                  {"intermediate_decay", c.model.intermediate_decay},
                  {"light_shift", c.model.light_shift}};
    j["noise"] = {{"poisson_atoms", c.noise.poisson_atoms},
                  {"blockade_kind", c.noise.blockade_kind},
                  {"blockade_value_mhz", c.noise.blockade_value_mhz},
                  {"blockade_mean_mhz", c.noise.blockade_mean_mhz},
                  {"blockade_stddev_mhz", c.noise.blockade_stddev_mhz},
                  {"blockade_lower_mhz", c.noise.blockade_lower_mhz},
                  {"blockade_upper_mhz", c.noise.blockade_upper_mhz},
                  {"trials", c.noise.trials},
                  {"common_random_numbers", c.noise.common_random_numbers}};
    j["retrieval"] = {{"eta_retrieval", c.retrieval.eta_retrieval},
                      {"eta_detection", c.retrieval.eta_detection},
                      {"splitter_ratio", c.retrieval.splitter_ratio}};
    j["integrator"] = {{"step_ns", c.integrator.step_ns},
                       {"norm_tolerance", c.integrator.norm_tolerance},
                       {"stride", c.integrator.stride}};
    j["rabi"] = {{"duration_min_ns", c.rabi.duration_min_ns},
                 {"duration_max_ns", c.rabi.duration_max_ns},
                 {"points", c.rabi.points}};
    j["area"] = {{"area_min_pi", c.area.area_min_pi},
                 {"area_max_pi", c.area.area_max_pi},
                 {"points", c.area.points},
                 {"chirp_rates_u", c.area.chirp_rates_u}};
    j["detuning"] = {{"delta1_min_mhz", c.detuning.delta1_min_mhz},
                     {"delta1_max_mhz", c.detuning.delta1_max_mhz},
                     {"points", c.detuning.points},
                     {"chirp_rate_u", c.detuning.chirp_rate_u},
                     {"area_search_min_pi", c.detuning.area_search_min_pi},
                     {"area_search_max_pi", c.detuning.area_search_max_pi}};
    j["run"] = {{"seed", c.seed}, {"workers", c.workers}};
    return j;
}

void overlay_config(Json& base, const Json& layer, const std::string& prefix)
{
    if (!layer.is_object())
        throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (auto it = layer.begin(); it != layer.end(); ++it) {
        const std::string& key = it.key();
        if (!key.empty() && key.front() == '_')
            continue;
        const std::string path = join(prefix, key);
        if (!base.contains(key))
            throw ConfigError(path, "unknown configuration key");
        Json& target = base[key];
        if (!compatible(target, it.value()))
            throw ConfigError(path, "expected " + type_label(target) + ", got " + it.value().dump());
        if (target.is_object())
            overlay_config(target, it.value(), path);
        else
            target = it.value();
    }
}

void apply_override(Json& tree, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(assignment, "override must look like section.key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded())
        value = text;

    Json layer = value;
    std::vector<std::string> parts;
    std::stringstream ss(path);
    for (std::string part; std::getline(ss, part, '.');)
        parts.push_back(part);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        layer = Json{{*it, layer}};
    overlay_config(tree, layer);
}

ScenarioConfig config_from_json(const Json& input)
{
    Json j = to_json(ScenarioConfig{});
    overlay_config(j, input);

    ScenarioConfig c;
    c.physics.omega1_mhz = get<double>(j, "physics", "omega1_mhz");
    c.physics.omega2_mhz = get<double>(j, "physics", "omega2_mhz");
    c.physics.delta1_mhz = get<double>(j, "physics", "delta1_mhz");
    c.physics.delta2_center_mhz = get<double>(j, "physics", "delta2_center_mhz");
    c.physics.n_atoms = get<double>(j, "physics", "n_atoms");
    c.physics.gamma_e_mhz = get<double>(j, "physics", "gamma_e_mhz");
    c.physics.gamma_r_mhz = get<double>(j, "physics", "gamma_r_mhz");
    c.pulse.duration_ns = get<double>(j, "pulse", "duration_ns");
    c.pulse.omega1_fwhm_ns = get<double>(j, "pulse", "omega1_fwhm_ns");
    c.pulse.omega1_edge_ns = get<double>(j, "pulse", "omega1_edge_ns");
    c.pulse.omega2_fwhm_ns = get<double>(j, "pulse", "omega2_fwhm_ns");
    c.pulse.pi_pulse_fwhm_ns = get<double>(j, "pulse", "pi_pulse_fwhm_ns");
    c.pulse.chirp_unit_mhz_per_us = get<double>(j, "pulse", "chirp_unit_mhz_per_us");
    c.model.tier = get<std::string>(j, "model", "tier");
    c.model.include_double = get<bool>(j, "model", "include_double");
    c.model.intermediate_decay = get<bool>(j, "model", "intermediate_decay");
    c.model.light_shift = get<bool>(j, "model", "light_shift");
    c.noise.poisson_atoms = get<bool>(j, "noise", "poisson_atoms");
    c.noise.blockade_kind = get<std::string>(j, "noise", "blockade_kind");
    c.noise.blockade_value_mhz = get<double>(j, "noise", "blockade_value_mhz");
    c.noise.blockade_mean_mhz = get<double>(j, "noise", "blockade_mean_mhz");
    c.noise.blockade_stddev_mhz = get<double>(j, "noise", "blockade_stddev_mhz");
    c.noise.blockade_lower_mhz = get<double>(j, "noise", "blockade_lower_mhz");
    c.noise.blockade_upper_mhz = get<double>(j, "noise", "blockade_upper_mhz");
    c.noise.trials = get<int>(j, "noise", "trials");
    c.noise.common_random_numbers = get<bool>(j, "noise", "common_random_numbers");
    c.retrieval.eta_retrieval = get<double>(j, "retrieval", "eta_retrieval");
    c.retrieval.eta_detection = get<double>(j, "retrieval", "eta_detection");
    c.retrieval.splitter_ratio = get<double>(j, "retrieval", "splitter_ratio");
    c.integrator.step_ns = get<double>(j, "integrator", "step_ns");
    c.integrator.norm_tolerance = get<double>(j, "integrator", "norm_tolerance");
    c.integrator.stride = get<int>(j, "integrator", "stride");
    c.rabi.duration_min_ns = get<double>(j, "rabi", "duration_min_ns");
    c.rabi.duration_max_ns = get<double>(j, "rabi", "duration_max_ns");
    c.rabi.points = get<int>(j, "rabi", "points");
    c.area.area_min_pi = get<double>(j, "area", "area_min_pi");
    c.area.area_max_pi = get<double>(j, "area", "area_max_pi");
    c.area.points = get<int>(j, "area", "points");
    c.area.chirp_rates_u = get<std::vector<double>>(j, "area", "chirp_rates_u");
    c.detuning.delta1_min_mhz = get<double>(j, "detuning", "delta1_min_mhz");
    c.detuning.delta1_max_mhz = get<double>(j, "detuning", "delta1_max_mhz");
    c.detuning.points = get<int>(j, "detuning", "points");
    c.detuning.chirp_rate_u = get<double>(j, "detuning", "chirp_rate_u");
    c.detuning.area_search_min_pi = get<double>(j, "detuning", "area_search_min_pi");
    c.detuning.area_search_max_pi = get<double>(j, "detuning", "area_search_max_pi");
    c.seed = get<std::uint64_t>(j, "run", "seed");
    c.workers = get<unsigned>(j, "run", "workers");
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::vector<std::string>& paths, const std::vector<std::string>& overrides)
{
    Json tree = to_json(ScenarioConfig{});
    for (const std::string& path : paths) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file " + path);
        Json layer = Json::parse(in, nullptr, false, true);
        if (layer.is_discarded())
            throw ConfigError(path, "config file is not valid JSON");
        overlay_config(tree, layer);
    }
    for (const std::string& o : overrides)
        apply_override(tree, o);
    return config_from_json(tree);
}

std::string config_hash(const ScenarioConfig& cfg)
{
    // The worker count does not change results, so it stays out of the hash.
    Json tree = to_json(cfg);
    tree["run"].erase("workers");
    const std::string canonical = tree.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string code_version() { return std::string("rydarp ") + RYDARP_VERSION; }

Provenance make_provenance(const ScenarioConfig& cfg) { return {config_hash(cfg), cfg.seed, code_version()}; }

}  // namespace rydarp
