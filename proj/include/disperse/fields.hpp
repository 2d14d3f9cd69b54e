#pragma once
// Initial-data and test-field builders.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "disperse/grid.hpp"

namespace disperse {

enum class ProfileKind { gaussian, sech_bump, plane_modulated };
std::string_view to_string(ProfileKind kind) noexcept;
/// Accepts "gaussian", "sech", "bump", "soliton-like", "plane-modulated".
std::optional<ProfileKind> parse_profile_kind(std::string_view name) noexcept;

/// gaussian         A exp(-(x-c)^2 / (2 w^2)) exp(i v x)
/// sech_bump        A sech((x-c) / w) exp(i v x)
/// plane_modulated  A exp(-(x-c)^2 / (2 w^2)) cos(v (x-c))
struct Profile {
  ProfileKind kind = ProfileKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double velocity = 0.0;
  void validate() const;
};

WaveField make_profile(const Profile& profile, const Grid& grid);

/// Random field with Fourier support in |k| <= k_max: Gaussian coefficients
/// under a smooth taper, times a Gaussian envelope of width `envelope` so the
/// field stays away from the box edge. Scaled to unit L^2 norm.
WaveField random_bandlimited(const Grid& grid, double k_max, double envelope, std::mt19937_64& rng);

}  // namespace disperse
