#pragma once

#include <optional>

#include "disperse/grid.hpp"
#include "disperse/potentials.hpp"

namespace disperse {

/// dx sum |u|^2
double mass(const WaveField& field);

/// Weight of the potential term in the energy functional.
///   half_potential  1/2 int |u'|^2 + 1/2 int V|u|^2 + 1/(a+2) int |u|^(a+2)
///                   (the Hamiltonian of i u_t = -u_xx + V u + |u|^a u; conserved)
///   unit_potential  1/2 int |u'|^2 +     int V|u|^2 + 1/(a+2) int |u|^(a+2)
///                   (same display without the 1/2 on the potential; kept for
///                   comparison, not conserved when V != 0)
enum class EnergyForm { half_potential, unit_potential };

/// alpha == 0 denotes the linear equation and drops the nonlinear term.
double energy(const WaveField& field, const PotentialSample* potential, double alpha,
              EnergyForm form = EnergyForm::half_potential);

inline double energy(const WaveField& field, const std::optional<PotentialSample>& potential,
                     double alpha, EnergyForm form = EnergyForm::half_potential) {
  return energy(field, potential ? &*potential : nullptr, alpha, form);
}

}  // namespace disperse
