#pragma once

// Periodic spectral discretization of the line.
//
// Nodes x_j = -L + j dx, j = 0..N-1, dx = 2L/N. Wavenumbers are stored in
// transform order: k_m = (pi/L) m for m < N/2, (pi/L)(m - N) otherwise.
//
// Transform convention (unitary DFT):
//   uhat_m = N^{-1/2} sum_j u_j exp(-2 pi i j m / N)
// so that dx * sum_j |u_j|^2 = dx * sum_m |uhat_m|^2 = ||u||_{L^2}^2, and the
// continuous multipliers (i k for d/dx, exp(-i k y) for translation by y,
// exp(-i k^2 t) for the free flow) act on uhat directly.

#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "disperse/error.hpp"

namespace disperse {

namespace detail {
struct FftPlans;
}

using cplx = std::complex<double>;

class Grid {
 public:
  Grid(std::size_t num_points, double half_width);

  std::size_t size() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept { return data_->nodes[j]; }
  std::span<const double> nodes() const noexcept { return data_->nodes; }
  std::span<const double> wavenumbers() const noexcept { return data_->k; }
  /// Wavenumbers with the Nyquist entry zeroed; used for differentiation.
  std::span<const double> derivative_wavenumbers() const noexcept { return data_->k_diff; }
  double nyquist() const noexcept;

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  bool operator==(const Grid& other) const noexcept {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  struct Shared {
    std::vector<double> nodes;
    std::vector<double> k;
    std::vector<double> k_diff;
    const detail::FftPlans* plans = nullptr;
  };
  std::size_t n_;
  double half_width_;
  double dx_;
  std::shared_ptr<const Shared> data_;
};

class WaveField {
 public:
  WaveField(Grid grid, std::vector<cplx> samples);
  static WaveField zeros(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  const cplx& operator[](std::size_t j) const noexcept { return samples_[j]; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Mutable access for builders and steppers. Finite-ness is re-checked only
  /// by `validate`.
  std::span<cplx> mutable_samples() noexcept { return samples_; }
  void validate() const;

 private:
  Grid grid_;
  std::vector<cplx> samples_;
};

/// Fourier coefficients of a WaveField in transform order.
struct Spectrum {
  Grid grid;
  std::vector<cplx> coeffs;
};

Spectrum fourier(const WaveField& field);
WaveField inverse_fourier(const Spectrum& spectrum);

WaveField spatial_derivative(const WaveField& field);
/// tau_y u = u(. - y), realized by exp(-i k y) in frequency. Rejects |y| >= 2L.
WaveField translate(const WaveField& field, double y);

/// (dx sum |u|^a)^{1/a}; a = infinity gives max |u|.
double lebesgue_norm(const WaveField& field, double a);
/// (dx sum_m (1 + k_m^2) |uhat_m|^2)^{1/2}, k with Nyquist zeroed, so that
/// ||u||_{H^1}^2 = ||u||_{L^2}^2 + ||u'||_{L^2}^2 exactly for the spectral u'.
double sobolev_h1_norm(const WaveField& field);

/// Time until content at the edge of the data's spectrum, moving at group
/// velocity 2k, travels the half-width L: L / (2 k_max). k_max is the smallest
/// |k| beyond which the spectral energy fraction is below `tail_fraction`.
/// Returns +infinity for the zero field.
double wraparound_horizon(const WaveField& field, double tail_fraction = 1e-12);

class EvolutionTrace {
 public:
  EvolutionTrace() = default;

  void append(double t, WaveField snapshot);
  void set_series(const std::string& name, std::vector<double> values);

  std::span<const double> times() const noexcept { return times_; }
  const std::vector<WaveField>& snapshots() const noexcept { return snapshots_; }
  const std::map<std::string, std::vector<double>>& series() const noexcept { return series_; }
  const std::vector<double>& series(const std::string& name) const;
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  /// Step size of the stepper that produced the trace; 0 when unknown.
  double step() const noexcept { return step_; }
  void set_step(double dt) noexcept { step_ = dt; }
  /// Last time covered by the wraparound horizon.
  double trusted_until() const noexcept { return trusted_until_; }
  void set_trusted_until(double t) noexcept { trusted_until_ = t; }
  bool untrusted() const noexcept { return times_.empty() ? false : times_.back() > trusted_until_; }

  void validate() const;

 private:
  std::vector<double> times_;
  std::vector<WaveField> snapshots_;
  std::map<std::string, std::vector<double>> series_;
  double step_ = 0.0;
  double trusted_until_ = std::numeric_limits<double>::infinity();
};

/// Trapezoid rule in time over ||u(t)||_{L^r}^p, then the p-th root.
/// p = infinity gives the sup over snapshots.
double spacetime_norm(const EvolutionTrace& trace, double p, double r);

}  // namespace disperse
