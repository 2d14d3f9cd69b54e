#include "disperse/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

namespace disperse::kernels {

namespace {

// Below this length the fork/join cost dominates.
constexpr std::ptrdiff_t kParallelThreshold = 2048;
constexpr std::ptrdiff_t kBlock = 1024;

cplx phase(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

// Deterministic blocked sum: each block is summed serially, block sums are
// combined in order.
template <class F>
double blocked_sum(std::ptrdiff_t n, F&& term) {
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t lo = b * kBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::ptrdiff_t j = lo; j < hi; ++j) s += term(j);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

// ---------------------------------------------------------------- serial

namespace serial {

void multiply(std::span<cplx> u, std::span<const cplx> factor) {
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= factor[j];
}

void scale(std::span<cplx> u, double s) {
  for (auto& z : u) z *= s;
}

void potential_phase(std::span<cplx> u, std::span<const double> v, double alpha, double tau) {
  const bool has_v = !v.empty();
  const bool nonlinear = alpha != 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    double w = has_v ? v[j] : 0.0;
    if (nonlinear) w += abs_pow(u[j], alpha);
    u[j] *= phase(-w * tau);
  }
}

double sum_abs_pow(std::span<const cplx> u, double a) {
  double s = 0.0;
  for (const auto& z : u) s += abs_pow(z, a);
  return s;
}

double max_abs(std::span<const cplx> u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::abs(z));
  return m;
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * std::norm(u[j]);
  return s;
}

double weighted_abs(std::span<const double> w, std::span<const cplx> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * std::abs(u[j]);
  return s;
}

double weighted_abs_pow(std::span<const double> w, std::span<const cplx> u, double a) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * abs_pow(u[j], a);
  return s;
}

double weighted_current(std::span<const double> w, std::span<const cplx> u,
                        std::span<const cplx> du) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * std::imag(std::conj(u[j]) * du[j]);
  return s;
}

}  // namespace serial

// -------------------------------------------------------------- parallel

namespace parallel {

void multiply(std::span<cplx> u, std::span<const cplx> factor) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  cplx* up = u.data();
  const cplx* fp = factor.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) up[j] *= fp[j];
}

void scale(std::span<cplx> u, double s) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  cplx* up = u.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) up[j] *= s;
}

void potential_phase(std::span<cplx> u, std::span<const double> v, double alpha, double tau) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  cplx* up = u.data();
  const double* vp = v.empty() ? nullptr : v.data();
  const bool nonlinear = alpha != 0.0;
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double w = vp ? vp[j] : 0.0;
    if (nonlinear) w += abs_pow(up[j], alpha);
    up[j] *= phase(-w * tau);
  }
}

double sum_abs_pow(std::span<const cplx> u, double a) {
  const cplx* up = u.data();
  return blocked_sum(static_cast<std::ptrdiff_t>(u.size()),
                     [=](std::ptrdiff_t j) { return abs_pow(up[j], a); });
}

double max_abs(std::span<const cplx> u) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const cplx* up = u.data();
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) m = std::max(m, std::abs(up[j]));
  return m;
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> u) {
  const double* wp = w.data();
  const cplx* up = u.data();
  return blocked_sum(static_cast<std::ptrdiff_t>(u.size()),
                     [=](std::ptrdiff_t j) { return wp[j] * std::norm(up[j]); });
}

double weighted_abs(std::span<const double> w, std::span<const cplx> u) {
  const double* wp = w.data();
  const cplx* up = u.data();
  return blocked_sum(static_cast<std::ptrdiff_t>(u.size()),
                     [=](std::ptrdiff_t j) { return wp[j] * std::abs(up[j]); });
}

double weighted_abs_pow(std::span<const double> w, std::span<const cplx> u, double a) {
  const double* wp = w.data();
  const cplx* up = u.data();
  return blocked_sum(static_cast<std::ptrdiff_t>(u.size()),
                     [=](std::ptrdiff_t j) { return wp[j] * abs_pow(up[j], a); });
}

double weighted_current(std::span<const double> w, std::span<const cplx> u,
                        std::span<const cplx> du) {
  const double* wp = w.data();
  const cplx* up = u.data();
  const cplx* dp = du.data();
  return blocked_sum(static_cast<std::ptrdiff_t>(u.size()), [=](std::ptrdiff_t j) {
    return wp[j] * std::imag(std::conj(up[j]) * dp[j]);
  });
}

}  // namespace parallel

}  // namespace disperse::kernels
