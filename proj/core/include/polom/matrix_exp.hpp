#pragma once

#include <Eigen/Core>

namespace polom {

/** \brief Matrix exponential by scaling and squaring with a diagonal Pade approximant.
 *
 * Degree 3, 5, 7, 9 or 13 is chosen from the 1-norm of the argument; the
 * thresholds are the ones that bound the backward error by the unit roundoff.
 */
Eigen::MatrixXcd matrix_exp(const Eigen::MatrixXcd& a);

} // namespace polom
