#include "disperse/propagators.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "disperse/conserved.hpp"
#include "disperse/kernels.hpp"

namespace disperse {

namespace {

constexpr double kBlowUpThreshold = 1e6;
constexpr double kEdgeMassTolerance = 1e-8;

struct StepPlan {
  std::size_t steps;
  double dt;
};

// Steps of (close to) the requested size that land exactly on t.
StepPlan plan_steps(double t, double dt) {
  if (t == 0.0) return {0, dt};
  const double span = std::abs(t);
  auto n = static_cast<std::size_t>(std::llround(span / dt));
  if (n == 0 || std::abs(static_cast<double>(n) * dt - span) > 1e-9 * std::max(1.0, span))
    n = static_cast<std::size_t>(std::ceil(span / dt));
  return {n, t / static_cast<double>(n)};
}

void require_compatible(const WaveField& field, const PotentialSample* potential) {
  if (potential && !(potential->grid == field.grid()))
    throw Error(ErrorKind::grid_mismatch, "potential sampled on a different grid");
}

double sup_norm(const WaveField& f) { return kernels::max_abs(f.samples()); }

}  // namespace

void StepperConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1)
    throw Error(ErrorKind::invalid_parameter, "dt must lie in (0, 0.1]");
  if (!(alpha == 0.0 || alpha > 4.0))
    throw Error(ErrorKind::invalid_parameter, "alpha must be 0 (linear) or > 4");
  if (record_every == 0) throw Error(ErrorKind::invalid_parameter, "record_every must be positive");
}

// ----------------------------------------------------------- StrangStepper

StrangStepper::StrangStepper(const Grid& grid, double dt, double alpha,
                             const PotentialSample* potential)
    : grid_(grid), dt_(dt), alpha_(alpha), kinetic_(grid.size()), scratch_(grid.size()) {
  if (potential) {
    if (!(potential->grid == grid)) throw Error(ErrorKind::grid_mismatch, "potential grid differs");
    v_ = potential->v;
  }
  const auto k = grid.wavenumbers();
  for (std::size_t m = 0; m < kinetic_.size(); ++m) kinetic_[m] = FlowConvention::kinetic(k[m], dt);
}

void StrangStepper::step(std::span<cplx> u) {
  const bool pointwise = !v_.empty() || alpha_ != 0.0;
  if (pointwise) kernels::potential_phase(u, v_, alpha_, 0.5 * dt_);
  grid_.forward(u, scratch_);
  kernels::multiply(scratch_, kinetic_);
  grid_.inverse(scratch_, u);
  if (pointwise) kernels::potential_phase(u, v_, alpha_, 0.5 * dt_);
}

// ----------------------------------------------------------------- flows

WaveField free_flow(const WaveField& field, double t, HorizonPolicy policy) {
  if (policy == HorizonPolicy::enforce) {
    const double horizon = wraparound_horizon(field);
    if (std::abs(t) > horizon) {
      std::ostringstream msg;
      msg << "|t| = " << std::abs(t) << " exceeds the wraparound horizon T_wrap = " << horizon;
      throw Error(ErrorKind::untrusted_window, msg.str());
    }
  }
  if (t == 0.0) return field;
  Spectrum s = fourier(field);
  const auto k = field.grid().wavenumbers();
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) s.coeffs[m] *= FlowConvention::kinetic(k[m], t);
  return inverse_fourier(s);
}

WaveField linear_flow_to(const WaveField& field, double t, double dt,
                         const PotentialSample* potential) {
  require_compatible(field, potential);
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_parameter, "dt must be positive");
  const StepPlan plan = plan_steps(t, dt);
  WaveField u = field;
  if (plan.steps == 0) return u;
  StrangStepper stepper(field.grid(), plan.dt, 0.0, potential);
  for (std::size_t s = 0; s < plan.steps; ++s) stepper.step(u.mutable_samples());
  return u;
}

EvolutionTrace linear_flow_v(const WaveField& field, double t, const StepperConfig& cfg) {
  cfg.validate();
  if (!cfg.potential) throw Error(ErrorKind::invalid_input, "linear_flow_v needs a potential");
  if (cfg.alpha != 0.0) throw Error(ErrorKind::invalid_parameter, "linear flow requires alpha = 0");
  if (t < 0.0) throw Error(ErrorKind::invalid_parameter, "trace time must be non-negative");
  require_compatible(field, &*cfg.potential);

  const StepPlan plan = plan_steps(t, cfg.dt);
  EvolutionTrace trace;
  trace.set_step(plan.dt);
  trace.set_trusted_until(wraparound_horizon(field));
  std::vector<double> masses, sups;
  auto record = [&](double time, const WaveField& u) {
    trace.append(time, u);
    masses.push_back(mass(u));
    sups.push_back(sup_norm(u));
  };

  WaveField u = field;
  record(0.0, u);
  StrangStepper stepper(field.grid(), plan.dt, 0.0, &*cfg.potential);
  for (std::size_t s = 1; s <= plan.steps; ++s) {
    stepper.step(u.mutable_samples());
    if (s % cfg.record_every == 0 || s == plan.steps) record(static_cast<double>(s) * plan.dt, u);
  }
  trace.set_series("mass", std::move(masses));
  trace.set_series("sup_norm", std::move(sups));
  return trace;
}

EvolutionTrace nls_flow(const WaveField& field, double t_final, const StepperConfig& cfg) {
  cfg.validate();
  if (!(cfg.alpha > 4.0)) throw Error(ErrorKind::invalid_parameter, "nls_flow requires alpha > 4");
  if (t_final < 0.0) throw Error(ErrorKind::invalid_parameter, "T must be non-negative");
  const PotentialSample* potential = cfg.potential ? &*cfg.potential : nullptr;
  require_compatible(field, potential);

  const StepPlan plan = plan_steps(t_final, cfg.dt);
  EvolutionTrace trace;
  trace.set_step(plan.dt);
  trace.set_trusted_until(wraparound_horizon(field));
  std::vector<double> masses, energies, sups, h1s;
  auto record = [&](double time, const WaveField& u) {
    const double sup = sup_norm(u);
    if (!(sup <= kBlowUpThreshold)) {
      std::ostringstream msg;
      msg << "sup norm " << sup << " at t = " << time << " exceeds " << kBlowUpThreshold;
      throw Error(ErrorKind::blow_up_suspected, msg.str());
    }
    trace.append(time, u);
    masses.push_back(mass(u));
    energies.push_back(energy(u, potential, cfg.alpha));
    sups.push_back(sup);
    h1s.push_back(sobolev_h1_norm(u));
  };

  WaveField u = field;
  record(0.0, u);
  StrangStepper stepper(field.grid(), plan.dt, cfg.alpha, potential);
  for (std::size_t s = 1; s <= plan.steps; ++s) {
    stepper.step(u.mutable_samples());
    const bool at_record = s % cfg.record_every == 0 || s == plan.steps;
    if (at_record) {
      record(static_cast<double>(s) * plan.dt, u);
    } else if (s % 16 == 0) {
      const double sup = sup_norm(u);
      if (!(sup <= kBlowUpThreshold)) {
        std::ostringstream msg;
        msg << "sup norm " << sup << " at step " << s << " exceeds " << kBlowUpThreshold;
        throw Error(ErrorKind::blow_up_suspected, msg.str());
      }
    }
  }
  trace.set_series("mass", std::move(masses));
  trace.set_series("energy", std::move(energies));
  trace.set_series("sup_norm", std::move(sups));
  trace.set_series("h1", std::move(h1s));
  return trace;
}

// ------------------------------------------------------ decay experiments

double edge_mass_fraction(const WaveField& field, double band) {
  const double l = field.grid().half_width();
  const double cut = (1.0 - band) * l;
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) {
    const double w = std::norm(field[j]);
    total += w;
    if (std::abs(field.grid().x(j)) >= cut) edge += w;
  }
  return total > 0.0 ? edge / total : 0.0;
}

std::vector<OffsetValue> flow_difference_decay(const WaveField& psi, const PotentialSample& sample,
                                               std::span<const double> offsets, double t_final,
                                               double p, double r, double dt) {
  require_compatible(psi, &sample);
  if (!(t_final > 0.0)) throw Error(ErrorKind::invalid_parameter, "T must be positive");
  const auto count = static_cast<std::ptrdiff_t>(offsets.size());
  std::vector<OffsetValue> out(offsets.size());
  std::vector<std::exception_ptr> errors(offsets.size());

  // Offsets are independent trajectories.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const double y = offsets[i];
      const WaveField start = translate(psi, y);
      StepperConfig cfg;
      cfg.dt = dt;
      cfg.potential = sample;
      const EvolutionTrace with_v = linear_flow_v(start, t_final, cfg);

      EvolutionTrace difference;
      bool trusted = !with_v.untrusted();
      const Spectrum s0 = fourier(start);
      const auto k = psi.grid().wavenumbers();
      for (std::size_t n = 0; n < with_v.size(); ++n) {
        const double t = with_v.times()[n];
        Spectrum s = s0;
        for (std::size_t m = 0; m < s.coeffs.size(); ++m) s.coeffs[m] *= FlowConvention::kinetic(k[m], t);
        WaveField free = inverse_fourier(s);
        const WaveField& pot = with_v.snapshots()[n];
        if (edge_mass_fraction(free) > kEdgeMassTolerance || edge_mass_fraction(pot) > kEdgeMassTolerance)
          trusted = false;
        auto d = free.mutable_samples();
        for (std::size_t j = 0; j < d.size(); ++j) d[j] -= pot[j];
        difference.append(t, std::move(free));
      }
      out[i] = {y, spacetime_norm(difference, p, r), trusted};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<OffsetValue> potential_overlap_decay(const WaveField& psi,
                                                 const PotentialSample& sample,
                                                 std::span<const double> offsets, double t_final,
                                                 double dt) {
  require_compatible(psi, &sample);
  if (t_final < 0.0) throw Error(ErrorKind::invalid_parameter, "T must be non-negative");
  const StepPlan plan = plan_steps(t_final, dt);
  const bool trusted_window = t_final <= wraparound_horizon(psi);

  std::vector<WaveField> flow;
  flow.reserve(plan.steps + 1);
  bool edge_ok = true;
  for (std::size_t s = 0; s <= plan.steps; ++s) {
    flow.push_back(free_flow(psi, static_cast<double>(s) * plan.dt, HorizonPolicy::ignore));
    if (edge_mass_fraction(flow.back()) > kEdgeMassTolerance) edge_ok = false;
  }

  const auto x = psi.grid().nodes();
  const double dx = psi.grid().dx();
  std::vector<OffsetValue> out;
  out.reserve(offsets.size());
  for (double y : offsets) {
    std::vector<double> shifted(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) shifted[j] = std::abs(sample.spec.value(x[j] + y));
    double sup = 0.0;
    for (const auto& f : flow) sup = std::max(sup, dx * kernels::weighted_abs(shifted, f.samples()));
    out.push_back({y, sup, trusted_window && edge_ok});
  }
  return out;
}

}  // namespace disperse
