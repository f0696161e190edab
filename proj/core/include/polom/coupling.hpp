#pragma once

#include "polom/dispersion.hpp"
#include "polom/params.hpp"

#include <complex>

namespace polom {

/// Single-polariton couplings for the scattering s_U(k_i) -> s_L(k_f) + phonon(k_i - k_f).
struct CouplingSet {
    double k_i = 0.0, k_f = 0.0;
    std::complex<double> g_vib, g_ir;      // to the bare vibration and IR photon, eV
    std::complex<double> g_upper, g_lower; // to the phonon-polariton branches, eV
};

CouplingSet coupling_set(double k_i, double k_f, const SystemParams& p);

/// Same as coupling_set but with explicitly supplied eigenbases.
CouplingSet coupling_from_bases(const ExcitonPolaritonBasis& initial, const ExcitonPolaritonBasis& final_,
                                const PhononPolaritonBasis& phonon, const SystemParams& p);

/// g * sqrt(n_pump).
std::complex<double> collective_coupling(std::complex<double> g, double n_pump);

} // namespace polom
