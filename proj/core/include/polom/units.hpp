#pragma once

namespace polom::units {

inline constexpr double hbar_ev_fs = 0.6582119569;     // eV * fs
inline constexpr double hbar_ev_s = 6.582119569e-16;   // eV * s
inline constexpr double hbar_c_ev_um = 0.1973269804;   // eV * um

/// Angular frequency in 1/fs for an energy in eV.
constexpr double rate(double energy_ev) { return energy_ev / hbar_ev_fs; }

/// Events per second for a linewidth (eV) times an occupation.
constexpr double per_second(double gamma_ev, double occupation) {
    return gamma_ev / hbar_ev_s * occupation;
}

} // namespace polom::units
