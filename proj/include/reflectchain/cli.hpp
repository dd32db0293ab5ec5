#pragma once

#include "reflectchain/fusion.hpp"
#include "reflectchain/report.hpp"

namespace reflectchain {

/// Batch front-end commands. Each runs its suite against the configuration,
/// writes the report when an output path is set, and returns the process
/// exit code: 0 all checks pass, 1 at least one failed, 2 invalid
/// configuration. Configuration errors raise std::invalid_argument; the CLI
/// maps them to exit 2.
struct CommandOptions {
  bool exhaustive = false;  // coefficient-wise commutativity for small L
};

int cmd_verify(const RunConfig& cfg, SuiteReport& out, const CommandOptions& opts = {});
int cmd_spectrum(const RunConfig& cfg, SuiteReport& out, const CommandOptions& opts = {});
int cmd_bethe(const RunConfig& cfg, SuiteReport& out, const CommandOptions& opts = {});
int cmd_fusion(const RunConfig& cfg, SuiteReport& out, const CommandOptions& opts = {});

}  // namespace reflectchain
