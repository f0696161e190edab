#pragma once

#include "polom/langevin.hpp"

#include <Eigen/Core>
#include <complex>

namespace polom {

enum class ModePair { s_vu, s_vl, vis_ir };

/// Symmetrized quadrature covariance of two modes, basis (x1, p1, x2, p2),
/// with x = (a + a+)/sqrt(2) so the vacuum has variance 1/2.
struct QuadratureCovariance {
    Eigen::Matrix4d r = 0.5 * Eigen::Matrix4d::Identity();
    ModePair pair = ModePair::s_vu;

    Eigen::Matrix2d block11() const { return r.topLeftCorner<2, 2>(); }
    Eigen::Matrix2d block22() const { return r.bottomRightCorner<2, 2>(); }
    Eigen::Matrix2d block12() const { return r.topRightCorner<2, 2>(); }
};

using Matrix4cd = Eigen::Matrix<std::complex<double>, 4, 4>;

/// Quadrature form of a 4x4 second-moment matrix in the order (a1, a1+, a2, a2+).
QuadratureCovariance quadrature_from_moments(const Matrix4cd& moments, ModePair pair);

QuadratureCovariance quadrature_reduce(const CovarianceSet& cov, ModePair pair);

/// Visible mode together with the IR output a_IR = vL cos(phi) + vU sin(phi),
/// with uncorrelated background occupations added to each.
QuadratureCovariance vis_ir_reduce(const CovarianceSet& cov, double phi, double n_bg_vis, double n_bg_ir);

/// Smallest symplectic eigenvalue of the partially transposed state.
double partial_transpose_min_eigenvalue(const QuadratureCovariance& q);

/// Values of -ln(2 xi) up to this are rounding residue of separable states.
inline constexpr double kSeparableTolerance = 1e-9;

/// -ln(2 xi), or 0 when that is below kSeparableTolerance.
double log_negativity(const QuadratureCovariance& q);

/// Uncertainty relation R + i Omega / 2 >= 0 (within tol).
bool is_physical(const QuadratureCovariance& q, double tol = 1e-9);

/// Signal-to-background ratios <n>/N_bg of the visible and IR outputs.
struct SignalToNoise {
    double vis = 0.0, ir = 0.0;
};
SignalToNoise signal_to_noise(const CovarianceSet& cov, double phi, double n_bg_vis, double n_bg_ir);

} // namespace polom
