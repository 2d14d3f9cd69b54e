#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "disperse/grid.hpp"
#include "disperse/potentials.hpp"

namespace disperse {

/// Zero-energy Jost solutions of u'' = V u, started from (u, u') = (1, 0) at
/// each box edge and integrated with classical RK4 to the other side.
struct JostResult {
  std::vector<double> u_minus;  // -> 1 at the left edge, sampled on grid nodes
  std::vector<double> u_plus;   // -> 1 at the right edge
  double wronskian = 0.0;       // u_plus u_minus' - u_plus' u_minus at x = 0, fine resolution
  double coarse_wronskian = 0.0;
  std::array<std::size_t, 2> resolution_pair{};  // RK4 steps across the box
  /// |W_coarse - W_fine| / |W_fine|, or the absolute difference when
  /// |W_fine| < kResonanceThreshold.
  double relative_drift = 0.0;
  /// max_x |W(x) - W(0)| at the coarse resolution.
  double constancy_deviation = 0.0;
  bool resonant = false;
};

/// |W| below this after refinement flags a zero-energy resonance.
inline constexpr double kResonanceThreshold = 1e-6;

JostResult jost_wronskian(const PotentialSample& sample);

/// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i + 1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Three-point finite-difference -d^2/dx^2 + V on the grid nodes with
/// Dirichlet conditions just outside the box.
Tridiagonal schrodinger_matrix(const PotentialSample& sample);

/// Number of eigenvalues strictly below sigma (Sturm sequence / LDL^T pivots).
std::size_t sturm_count(const Tridiagonal& t, double sigma);

struct BoundStates {
  std::size_t count = 0;
  std::optional<double> lowest;
};

/// Counts negative eigenvalues; the lowest one is refined by bisection to
/// well below 1e-6.
BoundStates bound_state_count(const PotentialSample& sample);

struct FormBoundsReport {
  std::vector<double> ratios;  // Q(u) / ||u||_{H^1}^2
  double sobolev_constant = 0.0;
  double v_l1 = 0.0;
  double upper_bound = 1.0;  // 1 + C_s ||V||_{L^1}
  bool all_within = true;
};

/// Q(u) = ||u'||^2 + int V|u|^2 + ||u||^2. C_s is the largest
/// ||u||_inf^2 / ||u||_{H^1}^2 over the supplied fields. Refuses potentials
/// with a negative part.
FormBoundsReport quadratic_form_bounds(const PotentialSample& sample,
                                       std::span<const WaveField> fields);

struct FlowBoundReport {
  std::vector<double> times;
  std::vector<double> ratios;  // ||u(t)||_{H^1} / ||u(0)||_{H^1}
  double max_ratio = 1.0;
  double sobolev_constant = 0.0;
  double bound = 1.0;  // 1 + C_s ||V||_{L^1}
  bool within_bound = true;
};

/// Evolves under the linear flow with potential and tracks the H^1 ratio.
/// Times past the wraparound horizon of `field` are refused.
FlowBoundReport h1_flow_bound(const PotentialSample& sample, const WaveField& field,
                              std::span<const double> times, double dt = 1e-2);

}  // namespace disperse
