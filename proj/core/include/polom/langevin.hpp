#pragma once

#include "polom/coupling.hpp"
#include "polom/params.hpp"

#include <Eigen/Core>
#include <complex>

namespace polom {

using Matrix6cd = Eigen::Matrix<std::complex<double>, 6, 6>;

/// Basis indices of the linearized system.
enum ModeIndex : int { idx_s = 0, idx_s_dag = 1, idx_vu = 2, idx_vu_dag = 3, idx_vl = 4, idx_vl_dag = 5 };

/// Everything the dynamics needs about one (k_i, k_f) pair. Energies in eV.
struct ModeSet {
    double k_i = 0.0, k_f = 0.0;
    double omega_pump = 0.0, gamma_pump = 0.0;  // upper exciton-polariton at k_i
    double omega_s = 0.0, gamma_s = 0.0;        // lower exciton-polariton at k_f
    double omega_vu = 0.0, gamma_vu = 0.0;
    double omega_vl = 0.0, gamma_vl = 0.0;
    double phi = 0.0;                           // phonon-polariton mixing angle at k_i - k_f
    double gamma_ir = 0.0;                      // bare IR cavity linewidth, sets the IR outcoupling
    std::complex<double> g_upper, g_lower;      // single-polariton couplings, eV
    double nth_s = 0.0, nth_vu = 0.0, nth_vl = 0.0;
};

ModeSet pair_modes(double k_i, double k_f, const SystemParams& p);

/// Drift and diffusion of dA/dt = M A + noise with A = (s, s+, vU, vU+, vL, vL+).
/// The s rows are in the frame rotating with the pump. Units 1/fs.
struct LangevinSystem {
    ModeSet modes;
    double n_pump = 0.0;
    Matrix6cd drift = Matrix6cd::Zero();
    Matrix6cd diffusion = Matrix6cd::Zero();
};

LangevinSystem assemble_system(const ModeSet& modes, double n_pump);
LangevinSystem build_system(double k_i, double k_f, double n_pump, const SystemParams& p);

/// Largest real part of the drift eigenvalues, 1/fs.
double stability_margin(const LangevinSystem& sys);

/// Pump occupation where the margin crosses zero; +inf if stable up to 1e12.
double instability_threshold(const ModeSet& modes);
double instability_threshold(double k_i, double k_f, const SystemParams& p);

/// Initial pump occupation of a decaying pulse where the fastest growth rate
/// equals the pump decay rate; above it the linearized picture breaks down.
double pulsed_applicability_bound(const ModeSet& modes);
double pulsed_applicability_bound(double k_i, double k_f, const SystemParams& p);

/// Equal-time second moments <A A^T> of the stationary state.
struct CovarianceSet {
    Matrix6cd second_moments = Matrix6cd::Zero();
    LangevinSystem system;

    double n_s() const { return second_moments(idx_s_dag, idx_s).real(); }
    double n_vu() const { return second_moments(idx_vu_dag, idx_vu).real(); }
    double n_vl() const { return second_moments(idx_vl_dag, idx_vl).real(); }
};

/// Solves M C + C M^T + D = 0 for C. Throws InstabilityError if the system is not stable.
CovarianceSet steady_covariance(const LangevinSystem& sys);

/// Solution of M C + C M^T + D = 0 without the stability check.
Matrix6cd solve_lyapunov(const Matrix6cd& m, const Matrix6cd& d);

/// <A(t + tau) A^T(t)> = exp(M tau) C for tau >= 0 (fs).
Matrix6cd two_time_covariance(const CovarianceSet& cov, double tau);

} // namespace polom
