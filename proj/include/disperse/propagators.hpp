#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "disperse/grid.hpp"
#include "disperse/potentials.hpp"

namespace disperse {

/// The one sign convention used by every propagator:
///
///   i u_t = -u_xx + V u + |u|^alpha u
///
/// Kinetic factor per mode over time t: exp(-i k^2 t).
/// Pointwise factor over time t:        exp(-i (V + |u|^alpha) t).
struct FlowConvention {
  static constexpr std::string_view equation = "i u_t = -u_xx + V u + |u|^alpha u";
  static cplx kinetic(double k, double t) noexcept { return std::polar(1.0, -k * k * t); }
};

struct StepperConfig {
  double dt = 1e-3;
  /// 0 for linear runs, otherwise > 4.
  double alpha = 0.0;
  std::size_t record_every = 1;
  std::optional<PotentialSample> potential;

  void validate() const;
};

/// One Strang step: half pointwise phase, full kinetic step, half pointwise
/// phase. Every substep is an exact L^2 isometry. Negative dt runs the linear
/// flow backwards (the exact inverse of the forward step when alpha == 0).
class StrangStepper {
 public:
  StrangStepper(const Grid& grid, double dt, double alpha, const PotentialSample* potential);

  void step(std::span<cplx> u);
  double dt() const noexcept { return dt_; }

 private:
  Grid grid_;
  double dt_;
  double alpha_;
  std::vector<double> v_;
  std::vector<cplx> kinetic_;
  std::vector<cplx> scratch_;
};

enum class HorizonPolicy { enforce, ignore };

/// Exact spectral multiplier exp(-i k^2 t).
WaveField free_flow(const WaveField& field, double t, HorizonPolicy policy = HorizonPolicy::enforce);

/// Linear flow with potential by Strang splitting (alpha must be 0). Records
/// every `record_every` steps plus the final state; series "mass" and
/// "sup_norm". Past the wraparound horizon the trace is flagged, not refused.
EvolutionTrace linear_flow_v(const WaveField& field, double t, const StepperConfig& cfg);

/// Final state of the Strang linear flow over time t (t may be negative).
/// `potential` may be null (free flow, split form).
WaveField linear_flow_to(const WaveField& field, double t, double dt,
                         const PotentialSample* potential);

/// Split-step flow of the nonlinear equation (alpha > 4, potential optional).
/// Series: "mass", "energy", "sup_norm", "h1". Throws blow-up-suspected if
/// the sup norm exceeds 1e6.
EvolutionTrace nls_flow(const WaveField& field, double t_final, const StepperConfig& cfg);

struct OffsetValue {
  double offset = 0.0;
  double value = 0.0;
  bool trusted = true;
};

/// For each y: || free(t) tau_y psi - linear_V(t) tau_y psi ||_{L^p(0,T) L^r}.
std::vector<OffsetValue> flow_difference_decay(const WaveField& psi, const PotentialSample& sample,
                                               std::span<const double> offsets, double t_final,
                                               double p, double r, double dt = 5e-3);

/// For each y: sup over recorded t of int |V(x + y)| |free(t) psi (x)| dx.
std::vector<OffsetValue> potential_overlap_decay(const WaveField& psi,
                                                 const PotentialSample& sample,
                                                 std::span<const double> offsets, double t_final,
                                                 double dt = 2e-2);

/// Fraction of the mass in the outer `band` (fraction of L) at each edge.
double edge_mass_fraction(const WaveField& field, double band = 0.05);

}  // namespace disperse
