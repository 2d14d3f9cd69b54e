#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disperse/conserved.hpp"
#include "disperse/grid.hpp"
#include "disperse/potentials.hpp"

namespace disperse {

// ------------------------------------------------------ Strichartz algebra

/// r = a + 2, q = 2a(a+2)/(a^2 - a - 4), p = 2a(a+2)/(a+4), gamma = 2a/(a-2).
struct ExponentSet {
  double alpha = 0.0;
  double r = 0.0;
  double q = 0.0;
  double p = 0.0;
  double gamma = 0.0;
};

/// Throws out-of-range for alpha <= 4.
ExponentSet strichartz_exponents(double alpha);

/// 1D admissibility 2/q + 1/r = 1/2 within 1e-12; infinite exponents allowed.
bool admissible_pair_check(double q, double r);

/// Hoelder conjugate x / (x - 1); 1 <-> infinity.
double dual_exponent(double x) noexcept;

/// || |U|^alpha U ||_{L^time L^space} over the trace.
double nonlinear_term_norm(const EvolutionTrace& trace, double alpha, double time_exp,
                           double space_exp);

// ------------------------------------------------------------ decay fits

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log residuals
  std::size_t samples = 0;
};

/// Least squares of log ||u(t)||_{L^a} against log t over snapshots with
/// t in [t0, t1]. Needs >= 8 samples and t1 inside the trusted horizon.
DecayFit decay_fit(const EvolutionTrace& trace, double a, double t0, double t1);

/// -1/2 (1 - 2/a), the L^a decay rate of the linear flow.
double expected_decay_slope(double a) noexcept;

// ----------------------------------------------------------- scattering

enum class Verdict { scattering_consistent, inconclusive, non_scattering_suspected };
std::string_view to_string(Verdict v) noexcept;

struct ScatterOptions {
  std::size_t max_pullbacks = 16;
  std::size_t windows = 4;
  double threshold = 1e-3;
  /// Step of the backward linear flow; 0 uses the trace's own step (or 5e-3).
  double pullback_dt = 0.0;
};

struct ScatterReport {
  std::vector<double> pullback_times;
  /// ||psi(t_{i+1}) - psi(t_i)||_{H^1}, psi(t) = (linear flow)^{-1} u(t).
  std::vector<double> cauchy_residuals;
  /// Same with the free flow as the comparison dynamics.
  std::vector<double> free_cauchy_residuals;
  std::vector<double> window_edges;
  /// ||u||_{L^p L^r} over consecutive windows.
  std::vector<double> strichartz_tail;
  bool tail_decreasing = false;
  bool with_potential = false;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
};

/// Pullbacks use the with-potential linear flow when `potential` is given and
/// the free flow otherwise; the free comparison is always reported.
ScatterReport scattering_detector(const EvolutionTrace& trace, const PotentialSample* potential,
                                  const ExponentSet& exponents, const ScatterOptions& options = {});

// ------------------------------------------------------------------ tails

struct TailRow {
  double radius = 0.0;
  double value = 0.0;  // int_{|x| >= R} |u'|^2 + |u|^2 + |u|^(alpha+2)
};

std::vector<TailRow> tail_compactness(const WaveField& field, double alpha,
                                      std::span<const double> radii);

}  // namespace disperse
