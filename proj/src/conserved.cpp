#include "disperse/conserved.hpp"

#include "disperse/kernels.hpp"

namespace disperse {

double mass(const WaveField& field) {
  return field.grid().dx() * kernels::sum_abs_pow(field.samples(), 2.0);
}

double energy(const WaveField& field, const PotentialSample* potential, double alpha,
              EnergyForm form) {
  const double dx = field.grid().dx();
  const WaveField du = spatial_derivative(field);
  double e = 0.5 * dx * kernels::sum_abs_pow(du.samples(), 2.0);
  if (potential) {
    if (!(potential->grid == field.grid()))
      throw Error(ErrorKind::grid_mismatch, "potential and field grids differ");
    const double weight = form == EnergyForm::half_potential ? 0.5 : 1.0;
    e += weight * dx * kernels::weighted_norm_sq(potential->v, field.samples());
  }
  if (alpha != 0.0) e += dx * kernels::sum_abs_pow(field.samples(), alpha + 2.0) / (alpha + 2.0);
  return e;
}

}  // namespace disperse
