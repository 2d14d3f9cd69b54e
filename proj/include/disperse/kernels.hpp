#pragma once

// Pointwise and reduction kernels shared by every propagator and diagnostic.
//
// Two implementations with identical signatures:
//   kernels::serial    straight loops in index order; the reference used by tests
//   kernels::parallel  OpenMP versions used by the library
//
// Parallel reductions accumulate fixed-size blocks and combine the block sums
// in index order, so results do not depend on the number of threads.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace disperse {

using cplx = std::complex<double>;

namespace kernels {

/// |z|^a via exp(a log|z|); magnitudes below 1e-300 map to 0.
inline double abs_pow(cplx z, double a) noexcept;

namespace serial {

void multiply(std::span<cplx> u, std::span<const cplx> factor);
void scale(std::span<cplx> u, double s);
/// u <- u exp(-i (v + |u|^alpha) tau). Empty v means no potential; alpha == 0
/// means no nonlinearity.
void potential_phase(std::span<cplx> u, std::span<const double> v, double alpha, double tau);
double sum_abs_pow(std::span<const cplx> u, double a);
double max_abs(std::span<const cplx> u);
/// sum_j w_j |u_j|^2
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> u);
/// sum_j w_j |u_j|
double weighted_abs(std::span<const double> w, std::span<const cplx> u);
/// sum_j w_j |u_j|^a
double weighted_abs_pow(std::span<const double> w, std::span<const cplx> u, double a);
/// sum_j w_j Im(conj(u_j) du_j)
double weighted_current(std::span<const double> w, std::span<const cplx> u,
                        std::span<const cplx> du);

}  // namespace serial

namespace parallel {

void multiply(std::span<cplx> u, std::span<const cplx> factor);
void scale(std::span<cplx> u, double s);
void potential_phase(std::span<cplx> u, std::span<const double> v, double alpha, double tau);
double sum_abs_pow(std::span<const cplx> u, double a);
double max_abs(std::span<const cplx> u);
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> u);
double weighted_abs(std::span<const double> w, std::span<const cplx> u);
double weighted_abs_pow(std::span<const double> w, std::span<const cplx> u, double a);
double weighted_current(std::span<const double> w, std::span<const cplx> u,
                        std::span<const cplx> du);

}  // namespace parallel

using parallel::max_abs;
using parallel::multiply;
using parallel::potential_phase;
using parallel::scale;
using parallel::sum_abs_pow;
using parallel::weighted_abs;
using parallel::weighted_abs_pow;
using parallel::weighted_current;
using parallel::weighted_norm_sq;

inline double abs_pow(cplx z, double a) noexcept {
  if (a == 2.0) return std::norm(z);
  const double m = std::abs(z);
  if (m < 1e-300) return 0.0;
  if (a == 1.0) return m;
  return std::exp(a * std::log(m));
}

}  // namespace kernels
}  // namespace disperse
