#include "disperse/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace disperse {

namespace {

constexpr double kEdgeTolerance = 1e-12;
constexpr double kCrossCheckTolerance = 1e-6;

double sech(double s) noexcept {
  const double e = std::exp(-std::abs(s));
  return 2.0 * e / (1.0 + e * e);
}

bool decayed_at(const PotentialSpec& spec, double x) {
  return std::abs(spec.value(x)) <= kEdgeTolerance && std::abs(spec.derivative(x)) <= kEdgeTolerance;
}

bool decayed_at_edges(const PotentialSpec& spec, double half_width) {
  return decayed_at(spec, -half_width) && decayed_at(spec, half_width);
}

double required_half_width(const PotentialSpec& spec, double current) {
  double hi = std::max(current, 1.0);
  while (!decayed_at_edges(spec, hi)) hi *= 2.0;
  double lo = hi / 2.0;
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (decayed_at_edges(spec, mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::sech2: return "sech2";
    case PotentialKind::gaussian: return "gaussian";
    case PotentialKind::well: return "well";
  }
  return "zero";
}

std::optional<PotentialKind> parse_potential_kind(std::string_view name) noexcept {
  if (name == "zero" || name == "none") return PotentialKind::zero;
  if (name == "sech2") return PotentialKind::sech2;
  if (name == "gaussian") return PotentialKind::gaussian;
  if (name == "well") return PotentialKind::well;
  return std::nullopt;
}

PotentialSpec::PotentialSpec(PotentialKind kind, double amplitude, double width, double center)
    : kind_(kind), amplitude_(amplitude), width_(width), center_(center) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw Error(ErrorKind::invalid_parameter, "potential width must be positive");
  if (!std::isfinite(amplitude) || !std::isfinite(center))
    throw Error(ErrorKind::invalid_parameter, "potential parameters must be finite");
  if (kind_ == PotentialKind::well) amplitude_ = -std::abs(amplitude_);
  if (kind_ == PotentialKind::zero) amplitude_ = 0.0;
}

double PotentialSpec::value(double x) const noexcept {
  const double s = (x - center_) / width_;
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::sech2:
    case PotentialKind::well: {
      const double h = sech(s);
      return amplitude_ * h * h;
    }
    case PotentialKind::gaussian: return amplitude_ * std::exp(-s * s);
  }
  return 0.0;
}

double PotentialSpec::derivative(double x) const noexcept {
  const double s = (x - center_) / width_;
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::sech2:
    case PotentialKind::well: {
      const double h = sech(s);
      return -2.0 * amplitude_ * h * h * std::tanh(s) / width_;
    }
    case PotentialKind::gaussian: return -2.0 * s * amplitude_ * std::exp(-s * s) / width_;
  }
  return 0.0;
}

PotentialSpec builtin_potential(PotentialKind kind, double amplitude, double width) {
  return PotentialSpec(kind, amplitude, width);
}

PotentialSample sample_potential(const PotentialSpec& spec, const Grid& grid) {
  const double l = grid.half_width();
  if (!decayed_at_edges(spec, l)) {
    std::ostringstream msg;
    msg << spec.name() << " potential does not decay below " << kEdgeTolerance
        << " at the box edge; half_width >= " << required_half_width(spec, l) << " required (have "
        << l << ")";
    throw Error(ErrorKind::domain_too_small, msg.str());
  }

  PotentialSample sample{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                         spec};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    sample.v[j] = spec.value(grid.x(j));
    sample.v_prime[j] = spec.derivative(grid.x(j));
  }

  if (spec.kind() != PotentialKind::zero) {
    std::vector<cplx> vc(sample.v.begin(), sample.v.end());
    const WaveField spectral = spatial_derivative(WaveField(grid, std::move(vc)));
    double max_prime = 0.0;
    double max_dev = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      max_prime = std::max(max_prime, std::abs(sample.v_prime[j]));
      max_dev = std::max(max_dev, std::abs(spectral[j].real() - sample.v_prime[j]));
    }
    if (max_dev > kCrossCheckTolerance * std::max(max_prime, 1e-300)) {
      std::ostringstream msg;
      msg << "analytic V' and spectral derivative of V differ by " << max_dev
          << " (relative " << max_dev / max_prime << "); refine the grid";
      throw Error(ErrorKind::under_resolved, msg.str());
    }
  }
  return sample;
}

HypothesisReport hypothesis_report(const PotentialSample& sample) {
  HypothesisReport r;
  const auto x = sample.grid.nodes();
  const double dx = sample.grid.dx();
  r.min_v = sample.v.empty() ? 0.0 : sample.v.front();
  r.max_xvprime = sample.v.empty() ? 0.0 : x.front() * sample.v_prime.front();
  for (std::size_t j = 0; j < sample.v.size(); ++j) {
    const double weight = 1.0 + std::abs(x[j]);
    r.l11_v += std::abs(sample.v[j]) * weight;
    r.l11_vprime += std::abs(sample.v_prime[j]) * weight;
    r.min_v = std::min(r.min_v, sample.v[j]);
    r.max_xvprime = std::max(r.max_xvprime, x[j] * sample.v_prime[j]);
  }
  r.l11_v *= dx;
  r.l11_vprime *= dx;
  r.nonneg = r.min_v >= -kSignTolerance;
  r.repulsive = r.max_xvprime <= kSignTolerance;
  r.admissible = r.nonneg && r.repulsive && std::isfinite(r.l11_v) && std::isfinite(r.l11_vprime);
  return r;
}

double potential_l1(const PotentialSample& sample) {
  double s = 0.0;
  for (double v : sample.v) s += std::abs(v);
  return s * sample.grid.dx();
}

}  // namespace disperse
