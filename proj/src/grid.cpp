#include "disperse/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "disperse/kernels.hpp"

namespace disperse {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::domain_too_small: return "domain-too-small";
    case ErrorKind::under_resolved: return "under-resolved";
    case ErrorKind::untrusted_window: return "untrusted-window";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::blow_up_suspected: return "blow-up-suspected";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::cutoff_exceeds_box: return "cutoff-exceeds-box";
    case ErrorKind::invalid_window: return "invalid-window";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

namespace detail {

struct FftPlans {
  fftw_plan forward;
  fftw_plan backward;
};

}  // namespace detail

namespace {

using Plans = detail::FftPlans;

// Planning is not thread-safe in FFTW; execution through fftw_execute_dft is.
// Plans are created once per length and live for the process.
const Plans& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::unordered_map<std::size_t, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p{fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags),
          fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags)};
  return cache.emplace(n, p).first->second;
}

void execute(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size()) throw Error(ErrorKind::invalid_input, "transform length mismatch");
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  } else {
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }
  kernels::scale(out, 1.0 / std::sqrt(static_cast<double>(out.size())));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorKind::grid_mismatch, "fields live on different grids");
}

}  // namespace

Grid::Grid(std::size_t num_points, double half_width) : n_(num_points), half_width_(half_width) {
  if (num_points < 8 || (num_points & (num_points - 1)) != 0)
    throw Error(ErrorKind::invalid_parameter,
                "num_points must be a power of two >= 8, got " + std::to_string(num_points));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorKind::invalid_parameter, "half_width must be positive and finite");
  dx_ = 2.0 * half_width / static_cast<double>(n_);

  auto shared = std::make_shared<Shared>();
  shared->nodes.resize(n_);
  shared->k.resize(n_);
  shared->k_diff.resize(n_);
  const double dk = std::numbers::pi / half_width;
  const auto n = static_cast<std::ptrdiff_t>(n_);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    shared->nodes[j] = -half_width + static_cast<double>(j) * dx_;
    const std::ptrdiff_t m = j < n / 2 ? j : j - n;
    shared->k[j] = dk * static_cast<double>(m);
    shared->k_diff[j] = (j == n / 2) ? 0.0 : shared->k[j];
  }
  shared->plans = &plans_for(n_);
  data_ = std::move(shared);
}

double Grid::nyquist() const noexcept {
  return std::numbers::pi * static_cast<double>(n_) / (2.0 * half_width_);
}

void Grid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_) throw Error(ErrorKind::invalid_input, "length does not match grid");
  execute(data_->plans->forward, in, out);
}

void Grid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_) throw Error(ErrorKind::invalid_input, "length does not match grid");
  execute(data_->plans->backward, in, out);
}

// ------------------------------------------------------------- WaveField

WaveField::WaveField(Grid grid, std::vector<cplx> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  validate();
}

WaveField WaveField::zeros(const Grid& grid) {
  return WaveField(grid, std::vector<cplx>(grid.size()));
}

void WaveField::validate() const {
  if (samples_.size() != grid_.size())
    throw Error(ErrorKind::invalid_input, "field has " + std::to_string(samples_.size()) +
                                              " samples on a grid of " +
                                              std::to_string(grid_.size()));
  for (const auto& z : samples_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::invalid_input, "field contains non-finite samples");
}

// ------------------------------------------------------------ transforms

Spectrum fourier(const WaveField& field) {
  Spectrum s{field.grid(), std::vector<cplx>(field.size())};
  field.grid().forward(field.samples(), s.coeffs);
  return s;
}

WaveField inverse_fourier(const Spectrum& spectrum) {
  if (spectrum.coeffs.size() != spectrum.grid.size())
    throw Error(ErrorKind::invalid_input, "spectrum length does not match grid");
  std::vector<cplx> out(spectrum.coeffs.size());
  spectrum.grid.inverse(spectrum.coeffs, out);
  return WaveField(spectrum.grid, std::move(out));
}

WaveField spatial_derivative(const WaveField& field) {
  Spectrum s = fourier(field);
  const auto k = field.grid().derivative_wavenumbers();
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) s.coeffs[m] *= cplx(0.0, k[m]);
  return inverse_fourier(s);
}

WaveField translate(const WaveField& field, double y) {
  const double l = field.grid().half_width();
  if (!std::isfinite(y) || std::abs(y) >= 2.0 * l)
    throw Error(ErrorKind::invalid_parameter,
                "translation " + std::to_string(y) + " is not smaller than the box length");
  if (y == 0.0) return field;
  Spectrum s = fourier(field);
  const auto k = field.grid().wavenumbers();
  for (std::size_t m = 0; m < s.coeffs.size(); ++m)
    s.coeffs[m] *= cplx(std::cos(k[m] * y), -std::sin(k[m] * y));
  return inverse_fourier(s);
}

// ----------------------------------------------------------------- norms

double lebesgue_norm(const WaveField& field, double a) {
  if (std::isnan(a) || a < 1.0)
    throw Error(ErrorKind::invalid_parameter, "Lebesgue exponent must be >= 1");
  if (std::isinf(a)) return kernels::max_abs(field.samples());
  const double s = field.grid().dx() * kernels::sum_abs_pow(field.samples(), a);
  return std::pow(s, 1.0 / a);
}

double sobolev_h1_norm(const WaveField& field) {
  const Spectrum s = fourier(field);
  const auto k = field.grid().derivative_wavenumbers();
  double total = 0.0;
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) total += (1.0 + k[m] * k[m]) * std::norm(s.coeffs[m]);
  return std::sqrt(field.grid().dx() * total);
}

double wraparound_horizon(const WaveField& field, double tail_fraction) {
  const Spectrum s = fourier(field);
  const auto k = field.grid().wavenumbers();
  const std::size_t n = s.coeffs.size();
  // Accumulate energy from the highest |k| inward; k_max is the first |k|
  // at which the energy strictly beyond it exceeds the tolerance.
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < n; ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(k[a]) > std::abs(k[b]); });
  double total = 0.0;
  for (const auto& c : s.coeffs) total += std::norm(c);
  if (total == 0.0) return std::numeric_limits<double>::infinity();
  double tail = 0.0;
  double k_max = 0.0;
  for (std::size_t idx = 0; idx < n;) {
    const double kk = std::abs(k[order[idx]]);
    double shell = 0.0;
    std::size_t next = idx;
    while (next < n && std::abs(k[order[next]]) == kk) shell += std::norm(s.coeffs[order[next++]]);
    if (tail + shell > tail_fraction * total) {
      k_max = kk;
      break;
    }
    tail += shell;
    idx = next;
  }
  if (k_max == 0.0) return std::numeric_limits<double>::infinity();
  return field.grid().half_width() / (2.0 * k_max);
}

// -------------------------------------------------------- EvolutionTrace

void EvolutionTrace::append(double t, WaveField snapshot) {
  if (!times_.empty()) {
    if (!(t > times_.back()))
      throw Error(ErrorKind::invalid_input, "trace times must be strictly increasing");
    require_same_grid(snapshots_.front().grid(), snapshot.grid());
  }
  times_.push_back(t);
  snapshots_.push_back(std::move(snapshot));
}

void EvolutionTrace::set_series(const std::string& name, std::vector<double> values) {
  if (values.size() != times_.size())
    throw Error(ErrorKind::invalid_input, "series '" + name + "' length does not match times");
  series_[name] = std::move(values);
}

const std::vector<double>& EvolutionTrace::series(const std::string& name) const {
  auto it = series_.find(name);
  if (it == series_.end()) throw Error(ErrorKind::invalid_input, "trace has no series '" + name + "'");
  return it->second;
}

void EvolutionTrace::validate() const {
  if (snapshots_.size() != times_.size())
    throw Error(ErrorKind::invalid_input, "snapshot count does not match times");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw Error(ErrorKind::invalid_input, "trace times must be strictly increasing");
  for (const auto& [name, values] : series_)
    if (values.size() != times_.size())
      throw Error(ErrorKind::invalid_input, "series '" + name + "' length does not match times");
}

double spacetime_norm(const EvolutionTrace& trace, double p, double r) {
  if (trace.size() < 2)
    throw Error(ErrorKind::invalid_input, "space-time norm needs at least two snapshots");
  if (std::isnan(p) || p < 1.0)
    throw Error(ErrorKind::invalid_parameter, "time exponent must be >= 1");
  const auto times = trace.times();
  const auto& snaps = trace.snapshots();
  std::vector<double> norms(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) norms[i] = lebesgue_norm(snaps[i], r);
  if (std::isinf(p)) return *std::max_element(norms.begin(), norms.end());
  double integral = 0.0;
  for (std::size_t i = 1; i < norms.size(); ++i)
    integral += 0.5 * (times[i] - times[i - 1]) * (std::pow(norms[i], p) + std::pow(norms[i - 1], p));
  return std::pow(integral, 1.0 / p);
}

}  // namespace disperse
