#pragma once
// Shared fixtures for the unit tests.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "disperse/error.hpp"
#include "disperse/grid.hpp"

namespace disperse::testing {

inline constexpr double kPi = std::numbers::pi;

template <class F>
WaveField sample_field(const Grid& g, F&& f) {
  std::vector<cplx> u(g.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = f(g.x(j));
  return WaveField(g, std::move(u));
}

/// Kind of the disperse::Error thrown by f, or nullopt if none is thrown.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

template <class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

inline WaveField gaussian(const Grid& g, double width = 1.0, double center = 0.0, double amp = 1.0) {
  return sample_field(g, [&](double x) {
    const double s = (x - center) / width;
    return cplx(amp * std::exp(-0.5 * s * s), 0.0);
  });
}

/// Smooth random field: a handful of Gaussian packets with random centers,
/// widths, momenta and phases, all well inside |x| < L/2.
inline WaveField random_packets(const Grid& g, std::mt19937_64& rng, int packets = 4) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double l = g.half_width();
  std::vector<cplx> u(g.size());
  for (int p = 0; p < packets; ++p) {
    const double c = (unit(rng) - 0.5) * 0.5 * l;
    const double w = 0.5 + 1.5 * unit(rng);
    const double k = (unit(rng) - 0.5) * 4.0;
    const cplx a = std::polar(0.2 + unit(rng), 2.0 * kPi * unit(rng));
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double s = (g.x(j) - c) / w;
      u[j] += a * std::exp(-0.5 * s * s) * std::polar(1.0, k * g.x(j));
    }
  }
  return WaveField(g, std::move(u));
}

inline double max_abs_diff(const WaveField& a, const WaveField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double l2_diff(const WaveField& a, const WaveField& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return std::sqrt(s * a.grid().dx());
}

}  // namespace disperse::testing
