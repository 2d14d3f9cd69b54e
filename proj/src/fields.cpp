#include "disperse/fields.hpp"

#include <cmath>

#include "disperse/conserved.hpp"
#include "disperse/kernels.hpp"

namespace disperse {

std::string_view to_string(ProfileKind kind) noexcept {
  switch (kind) {
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::sech_bump: return "sech";
    case ProfileKind::plane_modulated: return "plane-modulated";
  }
  return "gaussian";
}

std::optional<ProfileKind> parse_profile_kind(std::string_view name) noexcept {
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "sech" || name == "bump" || name == "soliton-like") return ProfileKind::sech_bump;
  if (name == "plane-modulated") return ProfileKind::plane_modulated;
  return std::nullopt;
}

void Profile::validate() const {
  if (!(width > 0.0) || !std::isfinite(width))
    throw Error(ErrorKind::invalid_parameter, "initial-data width must be positive");
  if (!std::isfinite(amplitude) || !std::isfinite(center) || !std::isfinite(velocity))
    throw Error(ErrorKind::invalid_parameter, "initial-data parameters must be finite");
}

WaveField make_profile(const Profile& p, const Grid& grid) {
  p.validate();
  std::vector<cplx> u(grid.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = grid.x(j);
    const double s = (x - p.center) / p.width;
    switch (p.kind) {
      case ProfileKind::gaussian:
        u[j] = p.amplitude * std::exp(-0.5 * s * s) * std::polar(1.0, p.velocity * x);
        break;
      case ProfileKind::sech_bump: {
        const double e = std::exp(-std::abs(s));
        u[j] = p.amplitude * (2.0 * e / (1.0 + e * e)) * std::polar(1.0, p.velocity * x);
        break;
      }
      case ProfileKind::plane_modulated:
        u[j] = p.amplitude * std::exp(-0.5 * s * s) * std::cos(p.velocity * (x - p.center));
        break;
    }
  }
  return WaveField(grid, std::move(u));
}

WaveField random_bandlimited(const Grid& grid, double k_max, double envelope, std::mt19937_64& rng) {
  if (!(k_max > 0.0) || !(envelope > 0.0))
    throw Error(ErrorKind::invalid_parameter, "k_max and envelope must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto k = grid.wavenumbers();
  std::vector<cplx> coeffs(grid.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const double a = normal(rng);
    const double b = normal(rng);
    const double r = std::abs(k[m]) / k_max;
    if (r < 1.0) coeffs[m] = cplx(a, b) * std::exp(-1.0 / (1.0 - r * r) + 1.0);
  }
  WaveField u = inverse_fourier(Spectrum{grid, std::move(coeffs)});
  auto s = u.mutable_samples();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double y = grid.x(j) / envelope;
    s[j] *= std::exp(-0.5 * y * y);
  }
  const double m = mass(u);
  if (m > 0.0) kernels::scale(s, 1.0 / std::sqrt(m));
  return u;
}

}  // namespace disperse
