#pragma once

#include "config.hpp"

#include <string>
#include <vector>

namespace dicke::cli {

const std::vector<std::string>& command_names();

// Every key any command understands.
const std::vector<std::string>& known_keys();

// Built-in values for keys the user did not set; `user` selects mode-dependent defaults.
Config default_config(const std::string& command, const Config& user);

struct CommandOutput {
  std::string csv;     // empty when the command produces no table
  std::string report;  // human-readable summary for stdout
};

// threads <= 0 means "use numerics.threads or the hardware count".
CommandOutput run_command(const std::string& command, const Config& config, int threads = 0);

}  // namespace dicke::cli
