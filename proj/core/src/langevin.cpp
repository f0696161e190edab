#include "polom/langevin.hpp"

#include "polom/dispersion.hpp"
#include "polom/errors.hpp"
#include "polom/matrix_exp.hpp"
#include "polom/units.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <string>

namespace polom {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

} // namespace

ModeSet pair_modes(double k_i, double k_f, const SystemParams& p) {
    const auto ini = exciton_polariton_basis(k_i, p);
    const auto fin = exciton_polariton_basis(k_f, p);
    const auto ph = phonon_polariton_basis(k_i - k_f, p);
    const auto c = coupling_from_bases(ini, fin, ph, p);

    ModeSet m;
    m.k_i = k_i;
    m.k_f = k_f;
    m.omega_pump = ini.omega_u;
    m.gamma_pump = ini.gamma_u;
    m.omega_s = fin.omega_l;
    m.gamma_s = fin.gamma_l;
    m.omega_vu = ph.omega_u;
    m.gamma_vu = ph.gamma_u;
    m.omega_vl = ph.omega_l;
    m.gamma_vl = ph.gamma_l;
    m.phi = ph.phi;
    m.gamma_ir = p.gamma_ir;
    m.g_upper = c.g_upper;
    m.g_lower = c.g_lower;
    m.nth_s = thermal_occupation(m.omega_s, p.kt);
    m.nth_vu = thermal_occupation(m.omega_vu, p.kt);
    m.nth_vl = thermal_occupation(m.omega_vl, p.kt);
    return m;
}

LangevinSystem assemble_system(const ModeSet& m, double n_pump) {
    if (!(n_pump >= 0.0))
        throw DomainError("pump occupation must be nonnegative");
    LangevinSystem sys;
    sys.modes = m;
    sys.n_pump = n_pump;
    auto& a = sys.drift;
    auto& d = sys.diffusion;

    auto place_mode = [&](int i, double omega, double gamma, double nth) {
        const double w = units::rate(omega);
        const double g = units::rate(gamma);
        a(i, i) = -I * w - g / 2.0;
        a(i + 1, i + 1) = I * w - g / 2.0;
        d(i, i + 1) = g * (1.0 + nth);
        d(i + 1, i) = g * nth;
    };
    place_mode(idx_s, m.omega_s - m.omega_pump, m.gamma_s, m.nth_s);
    place_mode(idx_vu, m.omega_vu, m.gamma_vu, m.nth_vu);
    place_mode(idx_vl, m.omega_vl, m.gamma_vl, m.nth_vl);

    auto place_coupling = [&](int v, std::complex<double> g) {
        const std::complex<double> big = units::rate(1.0) * collective_coupling(g, n_pump);
        // d s/dt  = ... - i G v+ ;  d s+/dt = ... + i G* v
        a(idx_s, v + 1) = -I * big;
        a(idx_s_dag, v) = I * std::conj(big);
        a(v, idx_s_dag) = -I * big;
        a(v + 1, idx_s) = I * std::conj(big);
    };
    place_coupling(idx_vu, m.g_upper);
    place_coupling(idx_vl, m.g_lower);
    return sys;
}

LangevinSystem build_system(double k_i, double k_f, double n_pump, const SystemParams& p) {
    return assemble_system(pair_modes(k_i, k_f, p), n_pump);
}

double stability_margin(const LangevinSystem& sys) {
    Eigen::ComplexEigenSolver<Matrix6cd> es(sys.drift, false);
    if (es.info() != Eigen::Success)
        throw InvalidStateError("eigenvalue computation of the drift matrix failed");
    return es.eigenvalues().real().maxCoeff();
}

namespace {

// Smallest pump occupation where the stability margin reaches `level` (1/fs).
double margin_crossing(const ModeSet& modes, double level) {
    constexpr double cap = 1e12;
    auto margin = [&](double n) { return stability_margin(assemble_system(modes, n)) - level; };
    if (margin(0.0) >= 0.0)
        throw InstabilityError("system is unstable without pump");

    double lo = 0.0;
    double hi = 1.0;
    while (margin(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) {
            if (margin(cap) < 0.0)
                return std::numeric_limits<double>::infinity();
            hi = cap;
            break;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double mg = margin(mid);
        if (std::abs(mg) < 1e-12 || hi - lo <= 1e-13 * hi)
            return mid;
        (mg < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double instability_threshold(const ModeSet& modes) { return margin_crossing(modes, 0.0); }

double pulsed_applicability_bound(const ModeSet& modes) {
    return margin_crossing(modes, units::rate(modes.gamma_pump));
}

double pulsed_applicability_bound(double k_i, double k_f, const SystemParams& p) {
    return pulsed_applicability_bound(pair_modes(k_i, k_f, p));
}

double instability_threshold(double k_i, double k_f, const SystemParams& p) {
    return instability_threshold(pair_modes(k_i, k_f, p));
}

Matrix6cd solve_lyapunov(const Matrix6cd& m, const Matrix6cd& d) {
    // Column-major vec: vec(M C + C M^T) = (I (x) M + M (x) I) vec(C)
    constexpr int n = 6;
    Eigen::Matrix<std::complex<double>, n * n, n * n> k;
    k.setZero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // block (i, j) of I (x) M is delta_ij M
            if (i == j)
                k.block<n, n>(i * n, j * n) += m;
            // block (i, j) of M (x) I is m_ij I
            for (int r = 0; r < n; ++r)
                k(i * n + r, j * n + r) += m(i, j);
        }
    Eigen::Matrix<std::complex<double>, n * n, 1> rhs;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            rhs(c * n + r) = -d(r, c);
    Eigen::Matrix<std::complex<double>, n * n, 1> x = k.partialPivLu().solve(rhs);
    Matrix6cd out;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            out(r, c) = x(c * n + r);
    return out;
}

CovarianceSet steady_covariance(const LangevinSystem& sys) {
    const double mg = stability_margin(sys);
    if (mg >= 0.0)
        throw InstabilityError("linearized system is unstable (margin " + std::to_string(mg) + " 1/fs) at n_pump = " +
                               std::to_string(sys.n_pump));
    CovarianceSet cov;
    cov.system = sys;
    cov.second_moments = solve_lyapunov(sys.drift, sys.diffusion);
    return cov;
}

Matrix6cd two_time_covariance(const CovarianceSet& cov, double tau) {
    if (!(tau >= 0.0))
        throw DomainError("two-time covariance needs tau >= 0");
    if (tau == 0.0)
        return cov.second_moments;
    const Eigen::MatrixXcd e = matrix_exp(Eigen::MatrixXcd(cov.system.drift * tau));
    return e * cov.second_moments;
}

} // namespace polom
