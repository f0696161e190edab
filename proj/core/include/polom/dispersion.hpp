#pragma once

#include "polom/params.hpp"

#include <Eigen/Core>
#include <complex>

namespace polom {

enum class LrBranch { left, right };

/// Rows of the Hopfield matrix.
enum HopfieldRow : int { row_exc = 0, row_vis_r = 1, row_vis_l = 2 };
/// Columns of the Hopfield matrix, ascending in energy.
enum HopfieldCol : int { col_lower = 0, col_upper = 1, col_higher = 2 };

/// Exciton-polariton eigenstates at one in-plane wave vector.
struct ExcitonPolaritonBasis {
    double k = 0.0;
    double omega_l = 0.0, omega_u = 0.0, omega_h = 0.0;
    double gamma_l = 0.0, gamma_u = 0.0, gamma_h = 0.0;
    // rows (exciton, right-running, left-running), columns (lower, upper, higher)
    Eigen::Matrix3cd hopfield = Eigen::Matrix3cd::Identity();
};

/// Mixed vibration / IR-cavity modes at wave vector q.
struct PhononPolaritonBasis {
    double q = 0.0;
    double phi = 0.0;  // mixing angle in [0, pi/2]
    double omega_u = 0.0, omega_l = 0.0;
    double gamma_u = 0.0, gamma_l = 0.0;
};

double lr_freq(double k, LrBranch branch, const SystemParams& p);
double ir_freq(double q, const SystemParams& p);

/// Largest |k| for which both running branches have nonnegative energy.
double max_wave_vector(const SystemParams& p);

/// Bare 3x3 coupling matrix in the (exciton, right, left) basis. Throws DomainError
/// when a running branch is negative.
Eigen::Matrix3d exciton_polariton_matrix(double k, const SystemParams& p);

ExcitonPolaritonBasis exciton_polariton_basis(double k, const SystemParams& p);

/// Decay rates of the three branches for a given Hopfield matrix.
Eigen::Vector3d branch_linewidths(const Eigen::Matrix3cd& hopfield, const SystemParams& p);

PhononPolaritonBasis phonon_polariton_basis(double q, const SystemParams& p);

/// Bose-Einstein occupation 1/(exp(omega/kT) - 1).
double thermal_occupation(double omega, double kt);

} // namespace polom
