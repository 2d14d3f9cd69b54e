#include "disperse/spectral_theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disperse/kernels.hpp"
#include "disperse/propagators.hpp"

namespace disperse {

namespace {

constexpr double kOverflow = 1e8;
constexpr double kTargetStep = 1e-2;

struct JostPass {
  std::vector<double> u_minus, du_minus, u_plus, du_plus;
  std::size_t steps = 0;
};

// RK4 for (u, u')' = (u', V u) from one edge node to the other, `sub` steps
// per grid interval; values are kept at grid nodes.
void integrate(const PotentialSpec& spec, std::span<const double> x, std::size_t sub,
               bool leftward, std::vector<double>& u_out, std::vector<double>& du_out) {
  const std::size_t n = x.size();
  u_out.assign(n, 0.0);
  du_out.assign(n, 0.0);
  double u = 1.0, du = 0.0;
  const std::size_t first = leftward ? n - 1 : 0;
  u_out[first] = u;
  du_out[first] = du;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t from = leftward ? n - i : i - 1;
    const std::size_t to = leftward ? n - 1 - i : i;
    const double h = (x[to] - x[from]) / static_cast<double>(sub);
    double xs = x[from];
    for (std::size_t s = 0; s < sub; ++s) {
      const double v0 = spec.value(xs);
      const double vh = spec.value(xs + 0.5 * h);
      const double v1 = spec.value(xs + h);
      const double k1u = du, k1d = v0 * u;
      const double k2u = du + 0.5 * h * k1d, k2d = vh * (u + 0.5 * h * k1u);
      const double k3u = du + 0.5 * h * k2d, k3d = vh * (u + 0.5 * h * k2u);
      const double k4u = du + h * k3d, k4d = v1 * (u + h * k3u);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      xs += h;
    }
    if (!(std::abs(u) <= kOverflow)) {
      std::ostringstream msg;
      msg << "Jost solution magnitude exceeds " << kOverflow << " near x = " << x[to];
      throw Error(ErrorKind::overflow, msg.str());
    }
    u_out[to] = u;
    du_out[to] = du;
  }
}

JostPass jost_pass(const PotentialSample& sample, std::size_t sub) {
  JostPass p;
  const auto x = sample.grid.nodes();
  integrate(sample.spec, x, sub, false, p.u_minus, p.du_minus);
  integrate(sample.spec, x, sub, true, p.u_plus, p.du_plus);
  p.steps = (x.size() - 1) * sub;
  return p;
}

double wronskian_at(const JostPass& p, std::size_t j) {
  return p.u_plus[j] * p.du_minus[j] - p.du_plus[j] * p.u_minus[j];
}

void require_nonnegative(const PotentialSample& sample) {
  for (double v : sample.v)
    if (v < -kSignTolerance)
      throw Error(ErrorKind::hypothesis_violation,
                  "potential has a negative part; the form bounds assume V >= 0");
}

double form_q(const WaveField& u, const PotentialSample& sample) {
  const double dx = u.grid().dx();
  const WaveField du = spatial_derivative(u);
  return dx * (kernels::sum_abs_pow(du.samples(), 2.0) + kernels::weighted_norm_sq(sample.v, u.samples()) +
               kernels::sum_abs_pow(u.samples(), 2.0));
}

double sobolev_ratio(const WaveField& u) {
  const double h1 = sobolev_h1_norm(u);
  if (h1 == 0.0) return 0.0;
  const double sup = lebesgue_norm(u, INFINITY);
  return sup * sup / (h1 * h1);
}

}  // namespace

JostResult jost_wronskian(const PotentialSample& sample) {
  const std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(sample.grid.dx() / kTargetStep)));
  JostPass coarse = jost_pass(sample, sub);
  const JostPass fine = jost_pass(sample, 2 * sub);
  const std::size_t centre = sample.grid.size() / 2;

  JostResult r;
  r.coarse_wronskian = wronskian_at(coarse, centre);
  r.wronskian = wronskian_at(fine, centre);
  r.resolution_pair = {coarse.steps, fine.steps};
  const double diff = std::abs(r.coarse_wronskian - r.wronskian);
  r.resonant = std::abs(r.wronskian) < kResonanceThreshold;
  r.relative_drift = r.resonant ? diff : diff / std::abs(r.wronskian);
  for (std::size_t j = 0; j < sample.grid.size(); ++j)
    r.constancy_deviation =
        std::max(r.constancy_deviation, std::abs(wronskian_at(coarse, j) - r.coarse_wronskian));
  r.u_minus = std::move(coarse.u_minus);
  r.u_plus = std::move(coarse.u_plus);
  return r;
}

Tridiagonal schrodinger_matrix(const PotentialSample& sample) {
  const std::size_t n = sample.grid.size();
  const double inv_dx2 = 1.0 / (sample.grid.dx() * sample.grid.dx());
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -inv_dx2);
  for (std::size_t j = 0; j < n; ++j) t.diag[j] = 2.0 * inv_dx2 + sample.v[j];
  return t;
}

std::size_t sturm_count(const Tridiagonal& t, double sigma) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1] / q;
    q = t.diag[i] - sigma - coupling;
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

BoundStates bound_state_count(const PotentialSample& sample) {
  const Tridiagonal t = schrodinger_matrix(sample);
  BoundStates out;
  out.count = sturm_count(t, 0.0);
  if (out.count == 0) return out;

  double lo = t.diag.front();
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double left = i == 0 ? 0.0 : std::abs(t.off[i - 1]);
    const double right = i + 1 < t.diag.size() ? std::abs(t.off[i]) : 0.0;
    lo = std::min(lo, t.diag[i] - left - right);
  }
  double hi = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(t, mid) >= 1 ? hi : lo) = mid;
  }
  out.lowest = 0.5 * (lo + hi);
  return out;
}

FormBoundsReport quadratic_form_bounds(const PotentialSample& sample,
                                       std::span<const WaveField> fields) {
  require_nonnegative(sample);
  FormBoundsReport r;
  r.v_l1 = potential_l1(sample);
  for (const auto& u : fields) {
    if (!(u.grid() == sample.grid)) throw Error(ErrorKind::grid_mismatch, "field grid differs");
    r.sobolev_constant = std::max(r.sobolev_constant, sobolev_ratio(u));
    const double h1 = sobolev_h1_norm(u);
    r.ratios.push_back(h1 == 0.0 ? 1.0 : form_q(u, sample) / (h1 * h1));
  }
  r.upper_bound = 1.0 + r.sobolev_constant * r.v_l1;
  constexpr double slack = 1e-12;
  for (double q : r.ratios)
    if (q < 1.0 - slack || q > r.upper_bound * (1.0 + slack)) r.all_within = false;
  return r;
}

FlowBoundReport h1_flow_bound(const PotentialSample& sample, const WaveField& field,
                              std::span<const double> times, double dt) {
  require_nonnegative(sample);
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 0.0)
    throw Error(ErrorKind::invalid_parameter, "flow-bound times must be non-negative");
  const double horizon = wraparound_horizon(field);
  if (!sorted.empty() && sorted.back() > horizon) {
    std::ostringstream msg;
    msg << "time " << sorted.back() << " exceeds the wraparound horizon " << horizon;
    throw Error(ErrorKind::untrusted_window, msg.str());
  }

  FlowBoundReport r;
  const double h1_0 = sobolev_h1_norm(field);
  r.sobolev_constant = sobolev_ratio(field);
  WaveField u = field;
  double t_prev = 0.0;
  for (double t : sorted) {
    u = linear_flow_to(u, t - t_prev, dt, &sample);
    t_prev = t;
    r.times.push_back(t);
    r.ratios.push_back(h1_0 == 0.0 ? 1.0 : sobolev_h1_norm(u) / h1_0);
    r.sobolev_constant = std::max(r.sobolev_constant, sobolev_ratio(u));
  }
  r.max_ratio = r.ratios.empty() ? 1.0 : *std::max_element(r.ratios.begin(), r.ratios.end());
  r.bound = 1.0 + r.sobolev_constant * potential_l1(sample);
  r.within_bound = r.max_ratio <= r.bound;
  return r;
}

}  // namespace disperse
