#include "polom/coupling.hpp"

#include "polom/errors.hpp"

#include <cmath>

namespace polom {

CouplingSet coupling_from_bases(const ExcitonPolaritonBasis& initial, const ExcitonPolaritonBasis& final_,
                                const PhononPolaritonBasis& phonon, const SystemParams& p) {
    const double scale = p.lambda_hr / std::sqrt(p.n_exc);
    const auto& wi = initial.hopfield;
    const auto& wf = final_.hopfield;
    const std::complex<double> xi_exc = wi(row_exc, col_upper);
    const std::complex<double> xi_vis = wi(row_vis_r, col_upper) + wi(row_vis_l, col_upper);
    const std::complex<double> xf_exc = wf(row_exc, col_lower);
    const std::complex<double> xf_vis = wf(row_vis_r, col_lower) + wf(row_vis_l, col_lower);

    CouplingSet c;
    c.k_i = initial.k;
    c.k_f = final_.k;
    c.g_vib = scale * p.rabi_vis * (std::conj(xi_vis) * xf_exc - std::conj(xi_exc) * xf_vis);
    c.g_ir = -scale * p.rabi_ir * std::conj(xi_exc) * xf_exc;
    const double s = std::sin(phonon.phi);
    const double co = std::cos(phonon.phi);
    c.g_upper = c.g_ir * s + c.g_vib * co;
    c.g_lower = c.g_ir * co - c.g_vib * s;
    return c;
}

CouplingSet coupling_set(double k_i, double k_f, const SystemParams& p) {
    return coupling_from_bases(exciton_polariton_basis(k_i, p), exciton_polariton_basis(k_f, p),
                               phonon_polariton_basis(k_i - k_f, p), p);
}

std::complex<double> collective_coupling(std::complex<double> g, double n_pump) {
    if (!(n_pump >= 0.0))
        throw DomainError("pump occupation must be nonnegative");
    return g * std::sqrt(n_pump);
}

} // namespace polom
