#pragma once
// Experiment configuration for disperse-lab.
//
// YAML layout (every block optional except grid):
//
//   grid:         {num_points: 4096, half_width: 40pi}
//   potential:    {kind: sech2, V0: 1.0, a: 1.0}        # or `potential: none`
//   initial_data: {kind: gaussian, amplitude: 1, width: 1, center: 0, velocity: 0}
//   stepper:      {dt: 1e-3, T: 10, record_every: 10}
//   alpha: 6
//   seed: 1
//   output_dir: out
//   decay:    {norms: [inf, 4], t0: 5, t1: 40}
//   scatter:  {pullbacks: 16, windows: 4, threshold: 1e-3}
//   virial:   {R: 10, random_fields: 20}
//   profiles: {offsets: [0, 10, 20, 30], T: 2, p: 4, r: inf}
//   tails:    {radii: [5, 10, 20]}
//   sweep:    {alpha: [5, 6], kind: [sech2], V0: [0, 1], amplitude: [0.06]}

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "disperse/fields.hpp"
#include "disperse/potentials.hpp"

namespace disperse::app {

struct GridBlock {
  std::size_t num_points = 1024;
  double half_width = 20.0;
};

struct PotentialBlock {
  PotentialKind kind = PotentialKind::zero;
  double v0 = 0.0;
  double a = 1.0;
};

struct StepperBlock {
  double dt = 1e-3;
  double t_final = 1.0;
  std::size_t record_every = 1;
};

struct DecayBlock {
  std::vector<double> norms{std::numeric_limits<double>::infinity(), 4.0};
  double t0 = 1.0;
  double t1 = 2.0;
};

struct ScatterBlock {
  std::size_t pullbacks = 16;
  std::size_t windows = 4;
  double threshold = 1e-3;
};

struct VirialBlock {
  double radius = 5.0;
  std::size_t random_fields = 20;
};

struct ProfilesBlock {
  std::vector<double> offsets{0.0, 10.0, 20.0, 30.0};
  double t_final = 2.0;
  double p = 4.0;
  double r = std::numeric_limits<double>::infinity();
};

struct TailsBlock {
  std::vector<double> radii{5.0, 10.0, 20.0};
};

struct SweepBlock {
  std::vector<double> alpha;
  std::vector<PotentialKind> kind;
  std::vector<double> v0;
  std::vector<double> amplitude;
};

struct ExperimentConfig {
  std::string source;  // file name used in diagnostics
  GridBlock grid;
  std::optional<PotentialBlock> potential;
  Profile initial_data;
  StepperBlock stepper;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string output_dir = "disperse-out";
  DecayBlock decay;
  ScatterBlock scatter;
  VirialBlock virial;
  ProfilesBlock profiles;
  TailsBlock tails;
  std::optional<SweepBlock> sweep;
};

/// Parses and validates. Every failure is an Error of kind `config` whose
/// message starts with "<file>:<line>:<column>:".
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// "40pi", "pi", "2.5" -> value.
double parse_length(const std::string& text);

/// Canonical JSON of everything that affects results (output_dir excluded).
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace disperse::app
