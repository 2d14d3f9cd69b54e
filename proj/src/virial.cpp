#include "disperse/virial.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "disperse/conserved.hpp"
#include "disperse/kernels.hpp"

namespace disperse {

namespace {

// Truncated Taylor series in h around a point: c[n] is the n-th coefficient,
// so the n-th derivative is n! c[n].
constexpr int kOrder = 5;
using Jet = std::array<double, kOrder>;

Jet constant(double c) {
  Jet j{};
  j[0] = c;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r{};
  for (int n = 0; n < kOrder; ++n) r[n] = a[n] + b[n];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r{};
  for (int n = 0; n < kOrder; ++n)
    for (int k = 0; k <= n; ++k) r[n] += a[k] * b[n - k];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet q{};
  for (int n = 0; n < kOrder; ++n) {
    double s = a[n];
    for (int k = 1; k <= n; ++k) s -= b[k] * q[n - k];
    q[n] = s / b[0];
  }
  return q;
}

Jet exp(const Jet& a) {
  Jet e{};
  e[0] = std::exp(a[0]);
  for (int n = 1; n < kOrder; ++n) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += k * a[k] * e[n - k];
    e[n] = s / n;
  }
  return e;
}

// exp(-1/s) for s > 0. Below s = 1e-2 the value and its first four
// derivatives are under 1e-27, so the jet is taken as zero there.
Jet bump(const Jet& s) {
  if (s[0] <= 1e-2) return constant(0.0);
  return exp(constant(-1.0) / s);
}

Jet sigma(const Jet& s) {
  if (s[0] >= 1.0) return constant(1.0);
  if (s[0] <= 0.0) return constant(0.0);
  const Jet f = bump(s);
  const Jet g = bump(constant(1.0) + constant(-1.0) * s);
  return f / (f + g);
}

// Jet of chi at x >= 0.
Jet chi_jet(double x) {
  Jet xj{};
  xj[0] = x;
  xj[1] = 1.0;
  const Jet s = constant(2.0) + constant(-1.0) * xj;
  return xj * xj * sigma(s);
}

constexpr std::array<double, kOrder> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0};

void require_same_grid(const WaveField& field, const CutoffFamily& cutoff) {
  if (!(field.grid() == cutoff.grid))
    throw Error(ErrorKind::grid_mismatch, "field and cutoff live on different grids");
}

}  // namespace

double cutoff_derivative(double x, int n) {
  if (n < 0 || n >= kOrder) throw Error(ErrorKind::invalid_parameter, "derivative order must be 0..4");
  const Jet j = chi_jet(std::abs(x));
  const double d = kFactorial[n] * j[n];
  // chi is even, so chi^(n)(-x) = (-1)^n chi^(n)(x).
  return (x < 0.0 && n % 2 == 1) ? -d : d;
}

CutoffFamily build_cutoff(double R, const Grid& grid) {
  if (!(R > 0.0)) throw Error(ErrorKind::invalid_parameter, "cutoff radius must be positive");
  if (2.0 * R >= grid.half_width()) {
    std::ostringstream msg;
    msg << "2R = " << 2.0 * R << " must be below the half-width " << grid.half_width();
    throw Error(ErrorKind::cutoff_exceeds_box, msg.str());
  }
  CutoffFamily c{R, grid, {}, {}, {}, {}, {}, {}};
  c.construction =
      "chi(x) = x^2 sigma(2 - |x|), sigma(s) = f(s)/(f(s) + f(1 - s)), f(s) = exp(-1/s); "
      "chi_R = R^2 chi(x/R); derivatives by exact Taylor-jet arithmetic";
  const std::size_t n = grid.size();
  for (auto* v : {&c.chi, &c.chi1, &c.chi2, &c.chi3, &c.chi4}) v->resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    const double y = std::abs(x) / R;
    const Jet jet = chi_jet(y);
    const double odd = x < 0.0 ? -1.0 : 1.0;
    // chi_R^(n)(x) = R^{2-n} chi^(n)(x / R)
    c.chi[j] = R * R * jet[0];
    c.chi1[j] = odd * R * jet[1];
    c.chi2[j] = 2.0 * jet[2];
    c.chi3[j] = odd * 6.0 * jet[3] / R;
    c.chi4[j] = 24.0 * jet[4] / (R * R);
  }
  return c;
}

double z_value(const WaveField& field, const CutoffFamily& cutoff) {
  require_same_grid(field, cutoff);
  return field.grid().dx() * kernels::weighted_norm_sq(cutoff.chi, field.samples());
}

std::vector<double> z_series(const EvolutionTrace& trace, const CutoffFamily& cutoff) {
  std::vector<double> z;
  z.reserve(trace.size());
  for (const auto& u : trace.snapshots()) z.push_back(z_value(u, cutoff));
  return z;
}

double z_prime(const WaveField& field, const CutoffFamily& cutoff) {
  require_same_grid(field, cutoff);
  const WaveField du = spatial_derivative(field);
  return 2.0 * field.grid().dx() * kernels::weighted_current(cutoff.chi1, field.samples(), du.samples());
}

ZDoublePrime z_doubleprime(const WaveField& field, const CutoffFamily& cutoff,
                           const PotentialSample* sample, double alpha) {
  require_same_grid(field, cutoff);
  if (sample && !(sample->grid == cutoff.grid))
    throw Error(ErrorKind::grid_mismatch, "potential and cutoff live on different grids");
  const double dx = field.grid().dx();
  const WaveField du = spatial_derivative(field);
  ZDoublePrime z;
  z.kinetic = 4.0 * dx * kernels::weighted_norm_sq(cutoff.chi2, du.samples());
  if (alpha != 0.0)
    z.nonlinear = 2.0 * alpha / (alpha + 2.0) * dx *
                  kernels::weighted_abs_pow(cutoff.chi2, field.samples(), alpha + 2.0);
  if (sample) {
    std::vector<double> w(cutoff.chi1.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = cutoff.chi1[j] * sample->v_prime[j];
    z.potential = -2.0 * dx * kernels::weighted_norm_sq(w, field.samples());
  }
  z.fourth = -dx * kernels::weighted_norm_sq(cutoff.chi4, field.samples());
  z.total = z.kinetic + z.nonlinear + z.potential + z.fourth;
  return z;
}

RigidityReport rigidity_report(const WaveField& field, const CutoffFamily& cutoff,
                               const PotentialSample& sample, double alpha) {
  require_same_grid(field, cutoff);
  if (!hypothesis_report(sample).repulsive)
    throw Error(ErrorKind::hypothesis_violation, "potential is not repulsive (x V' > 0 somewhere)");

  const double dx = field.grid().dx();
  const double R = cutoff.R;
  const WaveField du = spatial_derivative(field);
  RigidityReport r;

  double tail = 0.0, xv_tail = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) {
    const double x = field.grid().x(j);
    if (std::abs(x) <= R) continue;
    tail += std::norm(field[j]) + kernels::abs_pow(field[j], alpha + 2.0) + std::norm(du[j]);
    xv_tail += std::abs(x * sample.v_prime[j]);
  }
  r.delta = 0.5 * dx * kernels::sum_abs_pow(field.samples(), alpha + 2.0);
  r.tail = dx * tail;
  r.xvprime_tail = dx * xv_tail;
  r.mass = mass(field);
  r.mass_term = std::sqrt(r.mass) / (R * R);
  r.combination = r.delta - (r.tail + r.mass_term + r.xvprime_tail);

  r.energy = energy(field, &sample, alpha);
  r.z_prime = z_prime(field, cutoff);
  r.nominal_ceiling = 2.0 * std::sqrt(r.energy) * std::sqrt(r.mass) * R;
  double sup_chi1 = 0.0;
  for (double c : cutoff.chi1) sup_chi1 = std::max(sup_chi1, std::abs(c));
  const double du_norm = std::sqrt(dx * kernels::sum_abs_pow(du.samples(), 2.0));
  r.cauchy_schwarz_bound = 2.0 * sup_chi1 * du_norm * std::sqrt(r.mass);
  r.cauchy_schwarz_slack = r.cauchy_schwarz_bound > 0.0 ? std::abs(r.z_prime) / r.cauchy_schwarz_bound : 0.0;
  r.rigorous_ceiling = 2.0 * std::sqrt(2.0) * sup_chi1 * std::sqrt(r.energy) * std::sqrt(r.mass);
  r.z_doubleprime = z_doubleprime(field, cutoff, &sample, alpha);
  return r;
}

}  // namespace disperse
