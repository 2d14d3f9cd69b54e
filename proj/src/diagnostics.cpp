#include "disperse/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "disperse/kernels.hpp"
#include "disperse/propagators.hpp"

namespace disperse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultPullbackStep = 5e-3;

double inv(double x) noexcept { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

ExponentSet strichartz_exponents(double alpha) {
  if (!(alpha > 4.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "Strichartz exponents need alpha > 4, got " << alpha;
    throw Error(ErrorKind::out_of_range, msg.str());
  }
  const double a = alpha;
  return {a, a + 2.0, 2.0 * a * (a + 2.0) / (a * a - a - 4.0), 2.0 * a * (a + 2.0) / (a + 4.0),
          2.0 * a / (a - 2.0)};
}

bool admissible_pair_check(double q, double r) {
  return std::abs(2.0 * inv(q) + inv(r) - 0.5) <= 1e-12;
}

double dual_exponent(double x) noexcept {
  if (std::isinf(x)) return 1.0;
  if (x == 1.0) return kInf;
  return x / (x - 1.0);
}

double nonlinear_term_norm(const EvolutionTrace& trace, double alpha, double time_exp,
                           double space_exp) {
  EvolutionTrace nl;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const WaveField& u = trace.snapshots()[i];
    std::vector<cplx> f(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) f[j] = kernels::abs_pow(u[j], alpha) * u[j];
    nl.append(trace.times()[i], WaveField(u.grid(), std::move(f)));
  }
  return spacetime_norm(nl, time_exp, space_exp);
}

// ------------------------------------------------------------ decay fits

double expected_decay_slope(double a) noexcept { return -0.5 * (1.0 - 2.0 * inv(a)); }

DecayFit decay_fit(const EvolutionTrace& trace, double a, double t0, double t1) {
  if (!(t0 > 0.0) || !(t1 > t0))
    throw Error(ErrorKind::invalid_window, "decay window must satisfy 0 < t0 < t1");
  if (t1 > trace.trusted_until()) {
    std::ostringstream msg;
    msg << "window end " << t1 << " is past the trusted horizon " << trace.trusted_until();
    throw Error(ErrorKind::invalid_window, msg.str());
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = trace.times()[i];
    if (t < t0 || t > t1) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(lebesgue_norm(trace.snapshots()[i], a)));
  }
  if (lx.size() < 8) {
    std::ostringstream msg;
    msg << "decay window holds " << lx.size() << " snapshots; at least 8 needed";
    throw Error(ErrorKind::invalid_window, msg.str());
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.samples = lx.size();
  return fit;
}

// ----------------------------------------------------------- scattering

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::scattering_consistent: return "scattering-consistent";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::non_scattering_suspected: return "non-scattering-suspected";
  }
  return "inconclusive";
}

ScatterReport scattering_detector(const EvolutionTrace& trace, const PotentialSample* potential,
                                  const ExponentSet& exponents, const ScatterOptions& options) {
  ScatterReport report;
  report.with_potential = potential != nullptr;
  if (trace.size() < 3) {
    report.reason = "trace has fewer than three snapshots";
    return report;
  }
  const std::size_t m = std::max<std::size_t>(3, std::min(options.max_pullbacks, trace.size()));
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i)
    idx[i] = static_cast<std::size_t>(std::llround(static_cast<double>(i) * static_cast<double>(trace.size() - 1) /
                                                   static_cast<double>(m - 1)));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  const double dt = options.pullback_dt > 0.0 ? options.pullback_dt
                    : trace.step() > 0.0      ? trace.step()
                                              : kDefaultPullbackStep;
  std::vector<std::optional<WaveField>> pulled(idx.size()), pulled_free(idx.size());
  std::vector<std::exception_ptr> errors(idx.size());
  const auto count = static_cast<std::ptrdiff_t>(idx.size());

  // Pullbacks are independent backward linear flows.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const WaveField& u = trace.snapshots()[idx[i]];
      const double t = trace.times()[idx[i]];
      pulled_free[i] = free_flow(u, -t, HorizonPolicy::ignore);
      pulled[i] = potential ? linear_flow_to(u, -t, dt, potential) : *pulled_free[i];
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto h1_difference = [](const WaveField& a, const WaveField& b) {
    std::vector<cplx> d(a.samples().begin(), a.samples().end());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= b[j];
    return sobolev_h1_norm(WaveField(a.grid(), std::move(d)));
  };
  for (std::size_t i = 0; i < idx.size(); ++i) report.pullback_times.push_back(trace.times()[idx[i]]);
  for (std::size_t i = 1; i < idx.size(); ++i) {
    report.cauchy_residuals.push_back(h1_difference(*pulled[i], *pulled[i - 1]));
    report.free_cauchy_residuals.push_back(h1_difference(*pulled_free[i], *pulled_free[i - 1]));
  }

  // Windowed space-time tails.
  const double t_begin = trace.times().front();
  const double t_end = trace.times().back();
  const std::size_t nw = std::max<std::size_t>(2, options.windows);
  bool windows_ok = true;
  for (std::size_t w = 0; w <= nw; ++w)
    report.window_edges.push_back(t_begin + (t_end - t_begin) * static_cast<double>(w) / static_cast<double>(nw));
  for (std::size_t w = 0; w < nw; ++w) {
    EvolutionTrace window;
    const double lo = report.window_edges[w];
    const double hi = report.window_edges[w + 1];
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const double t = trace.times()[i];
      if (t >= lo - 1e-12 && t <= hi + 1e-12) window.append(t, trace.snapshots()[i]);
    }
    if (window.size() < 2) {
      windows_ok = false;
      report.strichartz_tail.push_back(std::nan(""));
      continue;
    }
    report.strichartz_tail.push_back(spacetime_norm(window, exponents.p, exponents.r));
  }
  report.tail_decreasing = windows_ok;
  for (std::size_t w = 1; w < report.strichartz_tail.size() && windows_ok; ++w)
    if (!(report.strichartz_tail[w] < report.strichartz_tail[w - 1])) report.tail_decreasing = false;

  const double final_residual = report.cauchy_residuals.back();
  const double max_residual =
      *std::max_element(report.cauchy_residuals.begin(), report.cauchy_residuals.end());

  if (trace.untrusted() || report.pullback_times.back() > trace.trusted_until()) {
    std::ostringstream msg;
    msg << "pullback times reach " << report.pullback_times.back()
        << " beyond the wraparound horizon " << trace.trusted_until();
    report.verdict = Verdict::inconclusive;
    report.reason = msg.str();
  } else if (!windows_ok) {
    report.verdict = Verdict::inconclusive;
    report.reason = "too few snapshots per space-time window";
  } else if (final_residual <= options.threshold && report.tail_decreasing) {
    report.verdict = Verdict::scattering_consistent;
    report.reason = "final Cauchy residual below threshold and decreasing space-time tails";
  } else if (final_residual > options.threshold &&
             (final_residual >= 0.5 * max_residual || !report.tail_decreasing)) {
    report.verdict = Verdict::non_scattering_suspected;
    report.reason = "pullbacks do not settle";
  } else {
    report.verdict = Verdict::inconclusive;
    report.reason = "mixed evidence";
  }
  return report;
}

// ------------------------------------------------------------------ tails

std::vector<TailRow> tail_compactness(const WaveField& field, double alpha,
                                      std::span<const double> radii) {
  const WaveField du = spatial_derivative(field);
  const auto x = field.grid().nodes();
  const double dx = field.grid().dx();
  std::vector<double> density(field.size());
  for (std::size_t j = 0; j < field.size(); ++j)
    density[j] = std::norm(du[j]) + std::norm(field[j]) + kernels::abs_pow(field[j], alpha + 2.0);
  std::vector<TailRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    double s = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j)
      if (std::abs(x[j]) >= r) s += density[j];
    rows.push_back({r, dx * s});
  }
  return rows;
}

}  // namespace disperse
