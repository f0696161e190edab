#include "polom/params.hpp"

#include "polom/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

namespace polom {

namespace {

struct Field {
    const char* key;
    double SystemParams::*member;
};

// gamma_vis_ev is handled separately because it sets both running directions.
constexpr Field kFields[] = {
    {"n_eff", &SystemParams::n_eff},
    {"lattice_a_um", &SystemParams::lattice_a},
    {"omega_ir0_ev", &SystemParams::omega_ir0},
    {"alpha_ir_ev_um2", &SystemParams::alpha_ir},
    {"omega_vib_ev", &SystemParams::omega_vib},
    {"omega_exc_shifted_ev", &SystemParams::omega_exc_shifted},
    {"lambda_hr", &SystemParams::lambda_hr},
    {"n_exc", &SystemParams::n_exc},
    {"rabi_vis_ev", &SystemParams::rabi_vis},
    {"rabi_ir_ev", &SystemParams::rabi_ir},
    {"gamma_vis_l_ev", &SystemParams::gamma_vis_l},
    {"gamma_vis_r_ev", &SystemParams::gamma_vis_r},
    {"gamma_ir_ev", &SystemParams::gamma_ir},
    {"gamma_exc_ev", &SystemParams::gamma_exc},
    {"q_vib", &SystemParams::q_vib},
    {"kt_ev", &SystemParams::kt},
    {"n_bg_vis", &SystemParams::n_bg_vis},
    {"n_bg_ir", &SystemParams::n_bg_ir},
    {"dephasing_exc_ev", &SystemParams::dephasing_exc},
};

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, const std::string& where) {
    double v = 0.0;
    auto first = text.data();
    auto last = text.data() + text.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(where + ": not a number: '" + std::string(text) + "'");
    return v;
}

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

SystemParams default_params() { return SystemParams{}; }

void validate(const SystemParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("invalid parameter ") + name + ": must be positive and finite");
    };
    positive(p.n_eff, "n_eff");
    positive(p.lattice_a, "lattice_a_um");
    positive(p.omega_ir0, "omega_ir0_ev");
    positive(p.alpha_ir, "alpha_ir_ev_um2");
    positive(p.omega_vib, "omega_vib_ev");
    positive(p.omega_exc_shifted, "omega_exc_shifted_ev");
    positive(p.rabi_vis, "rabi_vis_ev");
    positive(p.rabi_ir, "rabi_ir_ev");
    positive(p.gamma_vis_l, "gamma_vis_l_ev");
    positive(p.gamma_vis_r, "gamma_vis_r_ev");
    positive(p.gamma_ir, "gamma_ir_ev");
    positive(p.gamma_exc, "gamma_exc_ev");
    positive(p.q_vib, "q_vib");
    positive(p.kt, "kt_ev");
    if (!(p.lambda_hr >= 0.0) || !std::isfinite(p.lambda_hr))
        throw ConfigError("invalid parameter lambda_hr: must be >= 0");
    if (!(p.n_exc >= 1.0) || !std::isfinite(p.n_exc))
        throw ConfigError("invalid parameter n_exc: must be >= 1");
    if (!(p.n_bg_vis >= 0.0) || !(p.n_bg_ir >= 0.0))
        throw ConfigError("invalid background occupation: must be >= 0");
    if (!(p.dephasing_exc >= 0.0))
        throw ConfigError("invalid parameter dephasing_exc_ev: must be >= 0");
}

SystemParams parse_config(std::string_view text, const std::string& origin) {
    SystemParams p = default_params();
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": expected 'key = value'");
        double v = parse_number(value, where);

        if (key == "gamma_vis_ev") {
            p.gamma_vis_l = v;
            p.gamma_vis_r = v;
            continue;
        }
        bool found = false;
        for (const auto& f : kFields) {
            if (key == f.key) {
                p.*(f.member) = v;
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
        if (key == "dephasing_exc_ev")
            std::clog << "notice: " << where
                      << ": dephasing_exc_ev is stored but has no effect on the linearized model\n";
    }
    validate(p);
    return p;
}

SystemParams load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const SystemParams& p) {
    const SystemParams defaults;
    std::ostringstream out;
    for (const auto& f : kFields) {
        std::string_view key = f.key;
        if (key == "gamma_vis_l_ev" || key == "gamma_vis_r_ev") {
            if (p.gamma_vis_l == p.gamma_vis_r) {
                if (key == "gamma_vis_l_ev")
                    out << "gamma_vis_ev = " << format_exact(p.gamma_vis_l) << "\n";
                continue;
            }
        }
        if (key == "dephasing_exc_ev" && p.dephasing_exc == defaults.dephasing_exc)
            continue;
        out << key << " = " << format_exact(p.*(f.member)) << "\n";
    }
    return out.str();
}

void save_config(const SystemParams& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("failed to open for writing: " + path);
    out << serialize_config(p);
}

bool operator==(const SystemParams& a, const SystemParams& b) {
    for (const auto& f : kFields)
        if (a.*(f.member) != b.*(f.member))
            return false;
    return true;
}

} // namespace polom
