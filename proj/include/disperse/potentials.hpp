#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disperse/grid.hpp"

namespace disperse {

enum class PotentialKind { zero, sech2, gaussian, well };

std::string_view to_string(PotentialKind kind) noexcept;
std::optional<PotentialKind> parse_potential_kind(std::string_view name) noexcept;

/// Closed-form potential with its analytic derivative.
///   sech2     V0 sech^2((x - c)/a)
///   gaussian  V0 exp(-((x - c)/a)^2)
///   well      -|V0| sech^2((x - c)/a)
class PotentialSpec {
 public:
  PotentialSpec() = default;
  PotentialSpec(PotentialKind kind, double amplitude, double width, double center = 0.0);

  PotentialKind kind() const noexcept { return kind_; }
  std::string name() const { return std::string(to_string(kind_)); }
  double amplitude() const noexcept { return amplitude_; }
  double width() const noexcept { return width_; }
  double center() const noexcept { return center_; }

  double value(double x) const noexcept;
  double derivative(double x) const noexcept;

 private:
  PotentialKind kind_ = PotentialKind::zero;
  double amplitude_ = 0.0;
  double width_ = 1.0;
  double center_ = 0.0;
};

PotentialSpec builtin_potential(PotentialKind kind, double amplitude, double width);

struct PotentialSample {
  Grid grid;
  std::vector<double> v;
  std::vector<double> v_prime;
  PotentialSpec spec;
};

/// Samples V and V' on the grid. Fails with domain-too-small (naming the
/// half-width that would suffice) when |V| or |V'| exceeds 1e-12 at the box
/// edge, and with under-resolved when V' disagrees with the spectral
/// derivative of V by more than 1e-6 relative to max |V'|.
PotentialSample sample_potential(const PotentialSpec& spec, const Grid& grid);

struct HypothesisReport {
  double l11_v = 0.0;       // int |V| (1 + |x|)
  double l11_vprime = 0.0;  // int |V'| (1 + |x|)
  double min_v = 0.0;
  double max_xvprime = 0.0;
  bool nonneg = false;
  bool repulsive = false;
  bool admissible = false;
};

inline constexpr double kSignTolerance = 1e-12;

HypothesisReport hypothesis_report(const PotentialSample& sample);

/// dx sum |V|.
double potential_l1(const PotentialSample& sample);

}  // namespace disperse
