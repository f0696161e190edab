#include "polom/dispersion.hpp"

#include "polom/errors.hpp"
#include "polom/units.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

namespace polom {

double lr_freq(double k, LrBranch branch, const SystemParams& p) {
    const double slope = units::hbar_c_ev_um / p.n_eff;
    const double g = 2.0 * std::numbers::pi / p.lattice_a;
    return branch == LrBranch::left ? -slope * (k - g) : slope * (k + g);
}

double ir_freq(double q, const SystemParams& p) { return p.omega_ir0 + p.alpha_ir * q * q; }

double max_wave_vector(const SystemParams& p) { return 2.0 * std::numbers::pi / p.lattice_a; }

Eigen::Matrix3d exciton_polariton_matrix(double k, const SystemParams& p) {
    const double wr = lr_freq(k, LrBranch::right, p);
    const double wl = lr_freq(k, LrBranch::left, p);
    if (wr < 0.0 || wl < 0.0 || !std::isfinite(k))
        throw DomainError("wave vector k = " + std::to_string(k) +
                          " um^-1 lies outside the first zone crossing");
    Eigen::Matrix3d m;
    m << p.omega_exc_shifted, p.rabi_vis, p.rabi_vis,
         p.rabi_vis, wr, 0.0,
         p.rabi_vis, 0.0, wl;
    return m;
}

Eigen::Vector3d branch_linewidths(const Eigen::Matrix3cd& w, const SystemParams& p) {
    Eigen::Vector3d g;
    for (int c = 0; c < 3; ++c)
        g(c) = std::norm(w(row_vis_r, c)) * p.gamma_vis_r + std::norm(w(row_vis_l, c)) * p.gamma_vis_l +
               std::norm(w(row_exc, c)) * p.gamma_exc;
    return g;
}

ExcitonPolaritonBasis exciton_polariton_basis(double k, const SystemParams& p) {
    const Eigen::Matrix3d m = exciton_polariton_matrix(k, p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    if (es.info() != Eigen::Success)
        throw DomainError("eigen decomposition failed at k = " + std::to_string(k));

    ExcitonPolaritonBasis b;
    b.k = k;
    b.omega_l = es.eigenvalues()(0);
    b.omega_u = es.eigenvalues()(1);
    b.omega_h = es.eigenvalues()(2);
    b.hopfield = es.eigenvectors().cast<std::complex<double>>();

    // Gauge: the largest-magnitude entry of each column is real positive.
    for (int c = 0; c < 3; ++c) {
        int imax = 0;
        for (int r = 1; r < 3; ++r)
            if (std::abs(b.hopfield(r, c)) > std::abs(b.hopfield(imax, c)))
                imax = r;
        const auto z = b.hopfield(imax, c);
        b.hopfield.col(c) *= std::conj(z) / std::abs(z);
        b.hopfield(imax, c) = std::abs(z);
    }

    const Eigen::Vector3d g = branch_linewidths(b.hopfield, p);
    b.gamma_l = g(0);
    b.gamma_u = g(1);
    b.gamma_h = g(2);
    return b;
}

PhononPolaritonBasis phonon_polariton_basis(double q, const SystemParams& p) {
    if (!(p.rabi_ir > 0.0))
        throw DomainError("phonon-polariton mixing needs a positive IR Rabi energy");
    const double wir = ir_freq(q, p);
    const double delta = p.omega_vib - wir;
    const double om = p.rabi_ir;
    const double x = delta / (2.0 * om);

    PhononPolaritonBasis b;
    b.q = q;
    // sqrt(1 + x^2) - x, written to avoid cancellation for large positive x
    const double t = x > 0.0 ? 1.0 / (std::sqrt(1.0 + x * x) + x) : std::sqrt(1.0 + x * x) - x;
    b.phi = std::atan(t);
    const double mean = 0.5 * (p.omega_vib + wir);
    const double half_split = std::sqrt(0.25 * delta * delta + om * om);
    b.omega_u = mean + half_split;
    b.omega_l = mean - half_split;
    const double s2 = std::sin(b.phi) * std::sin(b.phi);
    const double c2 = std::cos(b.phi) * std::cos(b.phi);
    b.gamma_u = p.gamma_ir * s2 + p.gamma_vib() * c2;
    b.gamma_l = p.gamma_ir * c2 + p.gamma_vib() * s2;
    return b;
}

double thermal_occupation(double omega, double kt) {
    if (!(omega > 0.0) || !(kt > 0.0))
        throw DomainError("thermal occupation needs positive energy and temperature");
    return 1.0 / std::expm1(omega / kt);
}

} // namespace polom
