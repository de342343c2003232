// commands.hpp: subcommands of the `cmat` tool. Each returns a process
// exit code: 0 ok, 1 validation failure, 2 config error, 3 runtime failure.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cmat/config.hpp"
#include "cmat/validation.hpp"

namespace cmat {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_config = 2, exit_runtime = 3 };

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_speed_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidationOptions& opts, std::ostream& out, std::ostream& err);

/// Arguments after the program name: `<simulate|speed-limit|sweep|validate> [flags]`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cmat
