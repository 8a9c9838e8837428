#pragma once

#include "salem/config.hpp"

#include <iosfwd>
#include <string>

namespace salem {

enum ExitCode : int { kExitPass = 0, kExitLemma = 2, kExitBudget = 3, kExitConfig = 4 };

int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_measure(const RunConfig& cfg, std::ostream& log);
int cmd_decay(const RunConfig& cfg, std::ostream& log);
int cmd_regularity(const RunConfig& cfg, std::ostream& log);
int cmd_restriction(const RunConfig& cfg, std::ostream& log);
int cmd_dimension(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

// Validates the config, dispatches, and maps exceptions onto the exit-code taxonomy.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace salem
