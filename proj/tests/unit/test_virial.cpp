#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "disperse/conserved.hpp"
#include "disperse/fields.hpp"
#include "disperse/propagators.hpp"
#include "disperse/virial.hpp"
#include "support.hpp"

using namespace disperse;
using namespace disperse::testing;

namespace {

WaveField moving(const Grid& g, double center, double velocity, double width = 1.0, double amp = 1.0) {
  return sample_field(g, [&](double x) {
    const double s = (x - center) / width;
    return amp * std::exp(-0.5 * s * s) * std::polar(1.0, velocity * x);
  });
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

WaveField rotated(const WaveField& u, double theta) {
  std::vector<cplx> r(u.samples().begin(), u.samples().end());
  for (auto& z : r) z *= std::polar(1.0, theta);
  return WaveField(u.grid(), std::move(r));
}

}  // namespace

TEST_CASE("cutoff profile") {
  SUBCASE("plateau and support") {
    for (double x = -1.0; x <= 1.0; x += 0.125) {
      CHECK(cutoff_derivative(x, 0) == doctest::Approx(x * x).epsilon(1e-15));
      CHECK(cutoff_derivative(x, 1) == doctest::Approx(2.0 * x).epsilon(1e-15));
      CHECK(cutoff_derivative(x, 2) == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(cutoff_derivative(x, 3) == 0.0);
      CHECK(cutoff_derivative(x, 4) == 0.0);
    }
    for (double x : {2.0, 2.5, 7.0, -2.0, -3.0})
      for (int n = 0; n <= 4; ++n) CHECK(cutoff_derivative(x, n) == 0.0);
    CHECK(error_kind([] { cutoff_derivative(0.5, 5); }) == ErrorKind::invalid_parameter);
  }

  SUBCASE("parity") {
    for (double x = 0.05; x < 2.5; x += 0.1)
      for (int n = 0; n <= 4; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(cutoff_derivative(-x, n) == sign * cutoff_derivative(x, n));
      }
  }

  SUBCASE("jet derivatives against Richardson differences") {
    // Fourth-order central differences of the (n-1)-th derivative. The k-th
    // derivative of exp(-1/s) scales like s^{-2k}, so the step shrinks with
    // the squared distance to the nearest end of the transition.
    for (double x = 1.02; x < 1.99; x += 0.0731)
      for (int n = 1; n <= 4; ++n) {
        CAPTURE(x);
        CAPTURE(n);
        const double s = std::min(x - 1.0, 2.0 - x);
        const double h = std::min(1e-3, 0.05 * s * s);
        const auto f = [&](double y) { return cutoff_derivative(y, n - 1); };
        const double fd = (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
        CHECK(std::abs(cutoff_derivative(x, n) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      }
  }

  SUBCASE("sampled family against spectral derivatives") {
    const Grid g(4096, 20.0 * kPi);
    const CutoffFamily c = build_cutoff(5.0, g);
    const std::vector<const std::vector<double>*> levels{&c.chi, &c.chi1, &c.chi2, &c.chi3, &c.chi4};
    for (int n = 1; n <= 4; ++n) {
      std::vector<cplx> lower(levels[n - 1]->begin(), levels[n - 1]->end());
      const WaveField d = spatial_derivative(WaveField(g, lower));
      double err = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d[j].real() - (*levels[n])[j]));
      CAPTURE(n);
      CHECK(err <= 1e-6 * max_abs(*levels[n]));
    }
  }

  SUBCASE("integrals") {
    // The sigma transitions are steep; R = 2 needs dx ~ 0.015 for the
    // rectangle rule to reach roundoff.
    const Grid g(8192, 20.0 * kPi);
    for (double R : {2.0, 5.0, 10.0}) {
      const CutoffFamily c = build_cutoff(R, g);
      double inner = 0.0, total = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        total += c.chi2[j];
        if (std::abs(g.x(j)) <= R) inner += c.chi2[j];
      }
      // chi_R'' = 2 on [-R, R]; chi_R' vanishes outside [-2R, 2R].
      CHECK(std::abs(inner * g.dx() - 4.0 * R) <= 2.0 * g.dx());
      CHECK(std::abs(total * g.dx()) <= 1e-10);
    }
  }

  SUBCASE("radius checks") {
    const Grid g(512, 20.0);
    CHECK(error_kind([&] { build_cutoff(0.0, g); }) == ErrorKind::invalid_parameter);
    CHECK(error_kind([&] { build_cutoff(10.0, g); }) == ErrorKind::cutoff_exceeds_box);
    CHECK_NOTHROW(build_cutoff(9.9, g));
    CHECK_FALSE(build_cutoff(5.0, g).construction.empty());
  }
}

TEST_CASE("z and its first derivative") {
  const Grid g(2048, 20.0 * kPi);
  const CutoffFamily c = build_cutoff(10.0, g);

  SUBCASE("closed forms on the plateau") {
    // int x^2 exp(-x^2) = sqrt(pi)/2.
    CHECK(z_value(gaussian(g), c) == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-12));
    // Im(conj(u) u') = v |u|^2, so z' = 4 v int x |u|^2 = 4 v c sqrt(pi).
    CHECK(z_prime(moving(g, 1.5, 0.8), c) == doctest::Approx(4.0 * 0.8 * 1.5 * std::sqrt(kPi)).epsilon(1e-10));
    CHECK(std::abs(z_prime(gaussian(g, 1.0, 2.0), c)) <= 1e-14);
  }

  SUBCASE("sign follows the direction of motion") {
    CHECK(z_prime(moving(g, 2.0, 1.0), c) > 0.0);
    CHECK(z_prime(moving(g, 2.0, -1.0), c) < 0.0);
    CHECK(z_prime(moving(g, -2.0, -1.0), c) > 0.0);
  }

  SUBCASE("phase invariance") {
    std::mt19937_64 rng(4);
    const PotentialSample s = sample_potential(builtin_potential(PotentialKind::sech2, 1.0, 1.0), g);
    for (int i = 0; i < 5; ++i) {
      const WaveField u = random_packets(g, rng);
      const WaveField v = rotated(u, 0.3 + i);
      CHECK(z_value(v, c) == doctest::Approx(z_value(u, c)).epsilon(1e-13));
      CHECK(z_prime(v, c) == doctest::Approx(z_prime(u, c)).epsilon(1e-11).scale(1e-12));
      CHECK(z_doubleprime(v, c, &s, 6.0).total == doctest::Approx(z_doubleprime(u, c, &s, 6.0).total).epsilon(1e-12));
    }
  }

  SUBCASE("doubling the radius") {
    // chi_{2R}(x) = 4 chi_R(x/2), so z_{2R}[u(./2)] = 8 z_R[u].
    const CutoffFamily small = build_cutoff(3.0, g);
    const CutoffFamily big = build_cutoff(6.0, g);
    const WaveField u = moving(g, 0.7, 0.0, 1.0);
    const WaveField u2 = moving(g, 1.4, 0.0, 2.0);
    CHECK(z_value(u2, big) == doctest::Approx(8.0 * z_value(u, small)).epsilon(1e-10));
  }

  SUBCASE("series") {
    EvolutionTrace tr;
    for (int n = 0; n < 4; ++n) tr.append(n, gaussian(g, 1.0 + n));
    const auto z = z_series(tr, c);
    REQUIRE(z.size() == 4);
    for (int n = 0; n < 4; ++n) CHECK(z[n] == z_value(tr.snapshots()[n], c));
    CHECK(error_kind([&] { z_value(gaussian(Grid(1024, 20.0 * kPi)), c); }) == ErrorKind::grid_mismatch);
  }
}

TEST_CASE("second derivative") {
  const Grid g(2048, 20.0 * kPi);
  const CutoffFamily c = build_cutoff(10.0, g);
  const WaveField u = moving(g, 0.5, 0.7);

  SUBCASE("plateau identity") {
    const double alpha = 6.0;
    const ZDoublePrime z = z_doubleprime(u, c, nullptr, alpha);
    const WaveField du = spatial_derivative(u);
    double grad = 0.0, pot = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      grad += std::norm(du[j]);
      pot += std::pow(std::abs(u[j]), alpha + 2.0);
    }
    CHECK(z.kinetic == doctest::Approx(8.0 * grad * g.dx()).epsilon(1e-12));
    CHECK(z.nonlinear == doctest::Approx(4.0 * alpha / (alpha + 2.0) * pot * g.dx()).epsilon(1e-12));
    CHECK(std::abs(z.fourth) <= 1e-14);
    CHECK(z.potential == 0.0);
    CHECK(z.total == doctest::Approx(z.kinetic + z.nonlinear + z.fourth));
    CHECK(z_doubleprime(u, c, nullptr, 0.0).nonlinear == 0.0);
  }

  SUBCASE("repulsive potential term is non-negative") {
    for (auto kind : {PotentialKind::sech2, PotentialKind::gaussian}) {
      const PotentialSample s = sample_potential(builtin_potential(kind, 1.5, 1.0), g);
      for (double center : {-3.0, 0.0, 0.5, 4.0})
        CHECK(z_doubleprime(moving(g, center, 0.3), c, &s, 6.0).potential >= 0.0);
    }
  }
}

TEST_CASE("virial identities hold along the flow") {
  // Central differences of z along an evolution against z' and z''. The
  // stepper dt is fixed and small; halving the sampling stride must cut the
  // O(h^2) difference error by about four.
  const Grid g(1024, 16.0 * kPi);
  const PotentialSample s = sample_potential(builtin_potential(PotentialKind::sech2, 1.0, 1.0), g);
  const CutoffFamily c = build_cutoff(5.0, g);
  StepperConfig cfg;
  cfg.alpha = 6.0;
  cfg.dt = 1e-4;
  cfg.record_every = 100;
  cfg.potential = s;
  const EvolutionTrace tr = nls_flow(moving(g, -1.0, 1.0), 0.8, cfg);
  const auto z = z_series(tr, c);

  const auto residuals = [&](std::size_t stride) {
    const double h = stride * tr.step() * cfg.record_every;
    double r1 = 0.0, r2 = 0.0;
    // Same interior times for both strides.
    for (std::size_t n = 4; n + 4 < tr.size(); n += 4) {
      const WaveField& u = tr.snapshots()[n];
      const double d1 = (z[n + stride] - z[n - stride]) / (2.0 * h);
      const double d2 = (z[n + stride] - 2.0 * z[n] + z[n - stride]) / (h * h);
      r1 = std::max(r1, std::abs(d1 - z_prime(u, c)));
      r2 = std::max(r2, std::abs(d2 - z_doubleprime(u, c, &s, cfg.alpha).total));
    }
    return std::pair{r1, r2};
  };
  const auto [a1, a2] = residuals(4);
  const auto [b1, b2] = residuals(2);
  CAPTURE(a1);
  CAPTURE(b1);
  CAPTURE(a2);
  CAPTURE(b2);
  CHECK(a1 / b1 >= 3.5);
  CHECK(a1 / b1 <= 4.5);
  CHECK(a2 / b2 >= 3.5);
  CHECK(a2 / b2 <= 4.5);
}

TEST_CASE("rigidity report") {
  const Grid g(4096, 40.0 * kPi);
  const PotentialSample s = sample_potential(builtin_potential(PotentialKind::sech2, 1.0, 1.0), g);

  SUBCASE("zero field") {
    const RigidityReport r = rigidity_report(WaveField::zeros(g), build_cutoff(5.0, g), s, 6.0);
    CHECK(r.delta == 0.0);
    CHECK(r.tail == 0.0);
    CHECK(r.mass == 0.0);
    CHECK(r.mass_term == 0.0);
    CHECK(r.z_prime == 0.0);
    CHECK(r.nominal_ceiling == 0.0);
    CHECK(r.rigorous_ceiling == 0.0);
    CHECK(r.cauchy_schwarz_slack == 0.0);
    CHECK(r.combination == doctest::Approx(-r.xvprime_tail));
  }

  SUBCASE("localized field with a large radius") {
    const WaveField u = moving(g, 0.0, 0.5);
    const RigidityReport r = rigidity_report(u, build_cutoff(20.0, g), s, 6.0);
    CHECK(r.tail <= 1e-20);
    // int_{|x|>20} |x V'| ~ 2 * 40 * 20 e^{-40}.
    CHECK(r.xvprime_tail <= 1e-12);
    CHECK(r.mass == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(r.mass_term == doctest::Approx(std::pow(kPi, 0.25) / 400.0).epsilon(1e-12));
    CHECK(r.delta == doctest::Approx(0.5 * std::sqrt(kPi) / 2.0).epsilon(1e-12));
    CHECK(r.combination == doctest::Approx(r.delta - r.mass_term - r.tail - r.xvprime_tail));
    CHECK(r.combination > 0.0);
  }

  SUBCASE("ceilings are ordered on random fields") {
    const CutoffFamily c = build_cutoff(5.0, g);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      const WaveField u = random_bandlimited(g, 2.0, 3.0, rng);
      const RigidityReport r = rigidity_report(u, c, s, 6.0);
      // Cauchy-Schwarz is a theorem; V >= 0 gives ||u'||^2 <= 2E.
      CHECK(std::abs(r.z_prime) <= r.cauchy_schwarz_bound * (1.0 + 1e-12));
      CHECK(r.cauchy_schwarz_bound <= r.rigorous_ceiling * (1.0 + 1e-12));
      CHECK(r.cauchy_schwarz_slack <= 1.0 + 1e-12);
    }
  }

  SUBCASE("non-repulsive potentials are refused") {
    const PotentialSample well = sample_potential(builtin_potential(PotentialKind::well, 1.0, 1.0), g);
    CHECK(error_kind([&] { rigidity_report(gaussian(g), build_cutoff(5.0, g), well, 6.0); }) ==
          ErrorKind::hypothesis_violation);
  }
}
