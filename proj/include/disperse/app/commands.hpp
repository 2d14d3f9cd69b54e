#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "disperse/app/config.hpp"
#include "disperse/app/output.hpp"

namespace disperse::app {

/// 0 success/affirmative, 1 error, 2 hypothesis violation, 3 resonance flagged.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitHypothesis = 2, kExitResonant = 3 };

struct Context {
  ExperimentConfig config;
  std::filesystem::path output_dir;
  bool allow_untrusted = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  Json summary;
  std::vector<std::string> csv_paths;
};

CommandResult cmd_check_potential(const Context& ctx);
CommandResult cmd_resonance(const Context& ctx);
CommandResult cmd_spectrum(const Context& ctx);
CommandResult cmd_evolve(const Context& ctx);
CommandResult cmd_decay(const Context& ctx);
CommandResult cmd_scatter(const Context& ctx);
CommandResult cmd_virial(const Context& ctx);
CommandResult cmd_profiles(const Context& ctx);
CommandResult cmd_sweep(const Context& ctx);

/// Names accepted by run_command, in CLI order.
const std::vector<std::string>& command_names();

/// Runs one subcommand, writes <name>.json (summary + config hash) and
/// run.json (RunRecord) into the output directory, and maps errors to exit
/// code 1 with the message on stderr.
int run_command(const std::string& name, const Context& ctx);

/// Sweep concurrency from DISPERSE_LAB_THREADS (>= 1), else the OpenMP default.
int sweep_threads();

std::string version_string();

}  // namespace disperse::app
