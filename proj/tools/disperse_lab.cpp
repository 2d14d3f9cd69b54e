// disperse-lab: command-line front end for the experiment runner.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "disperse/app/commands.hpp"
#include "disperse/app/config.hpp"

int main(int argc, char** argv) {
  using namespace disperse::app;

  CLI::App app{"Split-step spectral experiments for defocusing NLS with a potential"};
  app.set_version_flag("--version", version_string());
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  bool allow_untrusted = false;
  app.add_option("--config", config_path, "YAML experiment configuration")->required();
  app.add_option("--output-dir", output_dir, "Directory for CSV/JSON artifacts (overrides output_dir)");
  app.add_option("--seed", seed, "Seed for randomized test fields (overrides seed)");
  app.add_flag("--allow-untrusted", allow_untrusted, "Run past the wraparound horizon");
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"check-potential", "Hypothesis report; exit 0 if admissible, 2 otherwise"},
      {"resonance", "Zero-energy Jost Wronskian; exit 3 if resonant"},
      {"spectrum", "Negative eigenvalues of -d^2/dx^2 + V"},
      {"evolve", "Evolve and write the conserved-quantity trace"},
      {"decay", "Fit dispersive decay slopes of the linear flow"},
      {"scatter", "Scattering detector on a nonlinear trajectory"},
      {"virial", "Virial identities, rigidity report and tails"},
      {"profiles", "Flow-difference and potential-overlap decay in the offset"},
      {"sweep", "Parameter sweep of scattering verdicts"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  Context ctx;
  try {
    ctx.config = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "disperse-lab: " << e.what() << '\n';
    return kExitError;
  }
  if (seed) ctx.config.seed = *seed;
  if (!output_dir.empty()) ctx.config.output_dir = output_dir;
  ctx.output_dir = ctx.config.output_dir;
  ctx.allow_untrusted = allow_untrusted;
  return run_command(app.get_subcommands().front()->get_name(), ctx);
}
