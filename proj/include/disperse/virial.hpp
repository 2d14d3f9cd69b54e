#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disperse/grid.hpp"
#include "disperse/potentials.hpp"

namespace disperse {

/// chi_R(x) = R^2 chi(x / R) with chi(x) = x^2 sigma(2 - |x|),
/// sigma(s) = f(s) / (f(s) + f(1 - s)), f(s) = exp(-1/s) for s > 0, else 0.
/// chi = x^2 on |x| <= 1 and 0 on |x| >= 2. Derivatives come from exact
/// Taylor-jet arithmetic on the recipe, not from differencing.
struct CutoffFamily {
  double R = 0.0;
  Grid grid;
  std::vector<double> chi, chi1, chi2, chi3, chi4;
  std::string construction;
};

/// n-th derivative (n <= 4) of the unscaled chi at x.
double cutoff_derivative(double x, int n);

/// Throws cutoff-exceeds-box when 2R >= half_width.
CutoffFamily build_cutoff(double R, const Grid& grid);

/// z_R = int chi_R |u|^2
double z_value(const WaveField& field, const CutoffFamily& cutoff);
std::vector<double> z_series(const EvolutionTrace& trace, const CutoffFamily& cutoff);

/// z_R' = 2 Im int chi_R' u' conj(u)
double z_prime(const WaveField& field, const CutoffFamily& cutoff);

struct ZDoublePrime {
  double kinetic = 0.0;    // 4 int chi'' |u'|^2
  double nonlinear = 0.0;  // 2a/(a+2) int chi'' |u|^(a+2)
  double potential = 0.0;  // -2 int chi' V' |u|^2
  double fourth = 0.0;     // -int chi'''' |u|^2
  double total = 0.0;
};

/// alpha == 0 drops the nonlinear term; a null sample drops the potential term.
ZDoublePrime z_doubleprime(const WaveField& field, const CutoffFamily& cutoff,
                           const PotentialSample* sample, double alpha);

struct RigidityReport {
  double delta = 0.0;         // 1/2 int |u|^(a+2)
  double tail = 0.0;          // int_{|x| > R} |u|^2 + |u|^(a+2) + |u'|^2
  double mass_term = 0.0;     // R^-2 ||u||_{L^2}
  double xvprime_tail = 0.0;  // int_{|x| > R} |x V'|
  double combination = 0.0;  // delta - (tail + mass_term + xvprime_tail)
  double energy = 0.0;
  double mass = 0.0;
  double z_prime = 0.0;
  /// 2 E^{1/2} M^{1/2} R
  double nominal_ceiling = 0.0;
  /// 2 sup|chi_R'| ||u'|| ||u||, the Cauchy-Schwarz bound on |z'|.
  double cauchy_schwarz_bound = 0.0;
  /// |z'| / cauchy_schwarz_bound
  double cauchy_schwarz_slack = 0.0;
  /// 2 sqrt(2) sup|chi_R'| E^{1/2} M^{1/2}; valid because V >= 0 gives
  /// ||u'||^2 <= 2E.
  double rigorous_ceiling = 0.0;
  ZDoublePrime z_doubleprime;
};

/// Throws hypothesis-violation when the potential is not repulsive.
RigidityReport rigidity_report(const WaveField& field, const CutoffFamily& cutoff,
                               const PotentialSample& sample, double alpha);

}  // namespace disperse
