// config.hpp: JSON run configuration for the command-line tool. Every
// validation failure is reported as a ConfigError naming the field path.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cmat/adiabatic.hpp"
#include "cmat/dynamics.hpp"
#include "cmat/model.hpp"
#include "cmat/sweep.hpp"

namespace cmat {

enum class Omega0Choice { Value, Balanced, Optimized };

struct PulseConfig {
    Omega0Choice choice = Omega0Choice::Value;
    double omega0 = 0.0;  // meaningful for Omega0Choice::Value
    double tau = 0.0;
    double halfwidth = PulseSchedule::default_halfwidth;
};

struct RunConfig {
    std::filesystem::path source;
    bool absolute_units = false;  // rates were given raw and have been divided by gamma
    std::optional<CqedParams> cqed;
    std::optional<PulseConfig> pulse;
    AdiabaticFactors factors;
    SimConfig sim;
    std::optional<SweepSpec> sweep;

    // Top-level scalars; command-line flags override them.
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::string> trajectory;
    bool strict = false;
};

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& source = {});
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json sweep_spec_to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j, const std::string& path = "sweep");

} // namespace cmat
