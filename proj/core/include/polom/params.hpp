#pragma once

#include <string>
#include <string_view>

namespace polom {

/// Physical constants of the structure. Energies in eV, lengths in um.
struct SystemParams {
    double n_eff = 1.42;
    double lattice_a = 0.35;
    double omega_ir0 = 0.14;
    double alpha_ir = 0.04;           // eV um^2
    double omega_vib = 0.2;
    double omega_exc_shifted = 2.72;  // exciton energy minus the reorganization shift
    double lambda_hr = 1.0;
    double n_exc = 1e8;
    double rabi_vis = 0.05;
    double rabi_ir = 0.016;
    double gamma_vis_l = 3e-3;
    double gamma_vis_r = 3e-3;
    double gamma_ir = 4e-3;
    double gamma_exc = 1e-5;
    double q_vib = 100.0;
    double kt = 0.025;
    double n_bg_vis = 1e-6;
    double n_bg_ir = 1e-3;
    // Pure dephasing of the exciton. Carried for completeness; the linearized
    // model has no channel for it.
    double dephasing_exc = 0.05;

    double gamma_vib() const { return omega_vib / q_vib; }
};

SystemParams default_params();

/// Throws ConfigError if any invariant is violated.
void validate(const SystemParams& p);

/// Parses `key = value` lines on top of the defaults.
SystemParams parse_config(std::string_view text, const std::string& origin = "<string>");
SystemParams load_config(const std::string& path);

/// Inverse of parse_config; values are written with round-trip precision.
std::string serialize_config(const SystemParams& p);
void save_config(const SystemParams& p, const std::string& path);

bool operator==(const SystemParams& a, const SystemParams& b);

} // namespace polom
