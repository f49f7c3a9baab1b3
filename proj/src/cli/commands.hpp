#pragma once

#include "config.hpp"
#include "output.hpp"

namespace skewlab::cli {

struct RunContext {
  const Config& config;
  OutputDir& out;
  Timings& timings;
  std::uint64_t system_hash = 0;
  int warnings = 0;
  std::string message;  // reason for a nonzero exit
};

using Command = int (*)(RunContext&);

/// Nullptr for unknown names.
Command find_command(const std::string& name);
const std::vector<std::string>& command_names();

}  // namespace skewlab::cli
