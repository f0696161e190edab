#include "polom/sweep.hpp"

#include "polom/correlations.hpp"
#include "polom/dispersion.hpp"
#include "polom/entanglement.hpp"
#include "polom/langevin.hpp"
#include "polom/lindblad.hpp"
#include "polom/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef POLOM_VERSION
#define POLOM_VERSION "0.0.0"
#endif

namespace polom {

const char* version() { return POLOM_VERSION; }

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

double to_number(const std::string& text, const std::string& key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError("scenario key '" + key + "': not a number: '" + text + "'");
    return v;
}

int to_int(const std::string& text, const std::string& key) {
    const double v = to_number(text, key);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("scenario key '" + key + "': expected an integer");
    return int(v);
}

const char* const kModes[] = {"dispersion", "logneg-polariton", "logneg-visir", "g2-map",       "g2-trace",
                              "qe-map",     "threshold-map",    "pulse",        "rates-sweep"};

bool needs_pair_grid(const std::string& m) { return m != "dispersion"; }
bool needs_pump(const std::string& m) {
    return m == "logneg-polariton" || m == "logneg-visir" || m == "g2-map" || m == "g2-trace" || m == "qe-map";
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
    v.back() = hi;
    return v;
}

std::string point_name(double ki, double kf) {
    return "(k_i, k_f) = (" + format_value(ki) + ", " + format_value(kf) + ") um^-1";
}

struct Pair {
    double ki, kf;
};

std::vector<Pair> pair_grid(const Scenario& sc) {
    std::vector<Pair> g;
    for (double ki : sc.ki->values())
        for (double kf : sc.kf->values())
            g.push_back({ki, kf});
    return g;
}

// Evaluates f over the grid in parallel and concatenates the produced rows in grid order.
template <class F>
std::vector<std::vector<double>> map_rows(const std::vector<Pair>& grid, int threads, F&& f) {
    std::vector<std::vector<std::vector<double>>> out(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        try {
            out[i] = f(grid[i]);
        } catch (const InvalidStateError& e) {
            throw GridPointError(std::string(e.what()) + " at " + point_name(grid[i].ki, grid[i].kf));
        } catch (const TruncationError& e) {
            throw GridPointError(std::string(e.what()) + " at " + point_name(grid[i].ki, grid[i].kf));
        }
    });
    std::vector<std::vector<double>> rows;
    for (auto& r : out)
        for (auto& row : r)
            rows.push_back(std::move(row));
    return rows;
}

// Steady state at a grid point, or nullopt when the point is above threshold.
std::optional<CovarianceSet> steady_or_unstable(const ModeSet& m, double n) {
    const LangevinSystem sys = assemble_system(m, n);
    if (stability_margin(sys) >= 0.0)
        return std::nullopt;
    return steady_covariance(sys);
}

std::vector<double> with_blanks(std::vector<double> head, std::size_t blanks) {
    head.insert(head.end(), blanks, nan_v);
    return head;
}

Table run_dispersion(const Scenario& sc, const SystemParams& p) {
    Table t;
    t.columns = {"k",        "omega_l",  "omega_u",  "omega_h",  "gamma_l", "gamma_u",
                 "gamma_h",  "exc_frac_l", "exc_frac_u", "omega_vis_l", "omega_vis_r", "omega_ir",
                 "omega_vu", "omega_vl", "gamma_vu", "gamma_vl", "phi"};
    for (double k : sc.ki->values()) {
        const auto e = exciton_polariton_basis(k, p);
        const auto ph = phonon_polariton_basis(k, p);
        t.rows.push_back({k, e.omega_l, e.omega_u, e.omega_h, e.gamma_l, e.gamma_u, e.gamma_h,
                          std::norm(e.hopfield(row_exc, col_lower)), std::norm(e.hopfield(row_exc, col_upper)),
                          lr_freq(k, LrBranch::left, p), lr_freq(k, LrBranch::right, p), ir_freq(k, p), ph.omega_u,
                          ph.omega_l, ph.gamma_u, ph.gamma_l, ph.phi});
    }
    return t;
}

Table run_pair_map(const Scenario& sc, const SystemParams& p, int threads) {
    Table t;
    const double n = *sc.n_pump;
    const auto& mode = sc.mode;
    std::vector<std::string> obs;
    if (mode == "logneg-polariton")
        obs = {"en_s_vu", "en_s_vl"};
    else if (mode == "logneg-visir")
        obs = {"en_visir", "en_visir_nobg", "snr_vis", "snr_ir"};
    else if (mode == "g2-map")
        obs = {"g2_cross0", "g2_cross0_nobg", "g2_heralded", "cs_violated"};
    else
        obs = {"qe", "n_s"};
    t.columns = {"k_i", "k_f", "stable"};
    t.columns.insert(t.columns.end(), obs.begin(), obs.end());

    t.rows = map_rows(pair_grid(sc), threads, [&](const Pair& pt) -> std::vector<std::vector<double>> {
        const ModeSet m = pair_modes(pt.ki, pt.kf, p);
        const auto cov = steady_or_unstable(m, n);
        if (!cov)
            return {with_blanks({pt.ki, pt.kf, 0.0}, obs.size())};
        std::vector<double> row = {pt.ki, pt.kf, 1.0};
        if (mode == "logneg-polariton") {
            row.push_back(log_negativity(quadrature_reduce(*cov, ModePair::s_vu)));
            row.push_back(log_negativity(quadrature_reduce(*cov, ModePair::s_vl)));
        } else if (mode == "logneg-visir") {
            row.push_back(log_negativity(vis_ir_reduce(*cov, m.phi, p.n_bg_vis, p.n_bg_ir)));
            row.push_back(log_negativity(vis_ir_reduce(*cov, m.phi, 0.0, 0.0)));
            const auto snr = signal_to_noise(*cov, m.phi, p.n_bg_vis, p.n_bg_ir);
            row.push_back(snr.vis);
            row.push_back(snr.ir);
        } else if (mode == "g2-map") {
            const double g = g2_cross(*cov, m.phi, 0.0, p.n_bg_vis, p.n_bg_ir, sc.filter);
            row.push_back(g);
            row.push_back(g2_cross(*cov, m.phi, 0.0, 0.0, 0.0, sc.filter));
            row.push_back(g2_heralded(g));
            row.push_back(cauchy_schwarz_violated(g) ? 1.0 : 0.0);
        } else {
            const double qe = quantum_efficiency(*cov);
            row.push_back(qe);
            row.push_back(cov->n_s());
        }
        return {row};
    });
    return t;
}

Table run_threshold_map(const Scenario& sc, const SystemParams& p, int threads) {
    Table t;
    t.columns = {"k_i", "k_f", "n_threshold", "n_pulsed_bound"};
    t.rows = map_rows(pair_grid(sc), threads, [&](const Pair& pt) -> std::vector<std::vector<double>> {
        const ModeSet m = pair_modes(pt.ki, pt.kf, p);
        return {{pt.ki, pt.kf, instability_threshold(m), pulsed_applicability_bound(m)}};
    });
    return t;
}

Table run_g2_trace(const Scenario& sc, const SystemParams& p, int threads) {
    Table t;
    t.columns = {"k_i", "k_f", "tau_fs", "stable", "g2_cross"};
    const auto taus = sc.tau->values();
    t.rows = map_rows(pair_grid(sc), threads, [&](const Pair& pt) {
        std::vector<std::vector<double>> rows;
        const ModeSet m = pair_modes(pt.ki, pt.kf, p);
        const auto cov = steady_or_unstable(m, *sc.n_pump);
        for (double tau : taus) {
            if (!cov)
                rows.push_back({pt.ki, pt.kf, tau, 0.0, nan_v});
            else
                rows.push_back({pt.ki, pt.kf, tau, 1.0, g2_cross(*cov, m.phi, tau, p.n_bg_vis, p.n_bg_ir, sc.filter)});
        }
        return rows;
    });
    if (sc.ki->values().size() == 1 && sc.kf->values().size() == 1 && taus.size() >= 8) {
        const auto m = pair_modes(sc.ki->min, sc.kf->min, p);
        t.metadata.push_back({"beat_expected_rad_per_fs", format_value(units::rate(m.omega_vu - m.omega_vl))});
    }
    return t;
}

Table run_rates_sweep(const Scenario& sc, const SystemParams& p, int threads) {
    Table t;
    t.columns = {"n_pump", "stable", "vis_rate", "ir_rate", "excess_ir_rate", "g2_cross0", "g2_heralded", "en_visir"};
    const ModeSet m = pair_modes(sc.ki->min, sc.kf->min, p);
    const auto pumps = log_grid(*sc.pump_min, *sc.pump_max, sc.pump_points);
    std::vector<std::vector<double>> rows(pumps.size());
    parallel_for(pumps.size(), threads, [&](std::size_t i) {
        const double n = pumps[i];
        try {
            const auto cov = steady_or_unstable(m, n);
            if (!cov) {
                rows[i] = with_blanks({n, 0.0}, 6);
                return;
            }
            const auto r = emission_rates(*cov);
            const double g = g2_cross(*cov, m.phi, 0.0, p.n_bg_vis, p.n_bg_ir, IrFilter::both);
            rows[i] = {n, 1.0, r.vis_rate, r.ir_rate, r.excess_ir_rate, g, g2_heralded(g),
                       log_negativity(vis_ir_reduce(*cov, m.phi, p.n_bg_vis, p.n_bg_ir))};
        } catch (const InvalidStateError& e) {
            throw GridPointError(std::string(e.what()) + " at " + point_name(m.k_i, m.k_f) +
                                 ", n_pump = " + format_value(n));
        }
    });
    t.rows = std::move(rows);
    t.metadata.push_back({"k_i", format_value(m.k_i)});
    t.metadata.push_back({"k_f", format_value(m.k_f)});
    return t;
}

Table run_pulse(const Scenario& sc, const SystemParams& p, int threads) {
    Table t;
    const ModeSet m = pair_modes(sc.ki->min, sc.kf->min, p);
    FockConfig fc;
    fc.cutoff_s = sc.cutoff_s;
    fc.cutoff_vu = sc.cutoff_vu;
    fc.cutoff_vl = sc.cutoff_vl;
    fc.dt = sc.dt;
    fc.t_end = sc.t_end;
    validate(fc);
    auto named = [&](double n0, auto&& f) {
        try {
            return f();
        } catch (const Error& e) {
            if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e))
                throw;
            throw GridPointError(std::string(e.what()) + " at " + point_name(m.k_i, m.k_f) + ", n0 = " + format_value(n0));
        }
    };
    t.metadata.push_back({"k_i", format_value(m.k_i)});
    t.metadata.push_back({"k_f", format_value(m.k_f)});

    if (sc.n0) {
        const auto tr = named(*sc.n0, [&] { return evolve(m, *sc.n0, fc, DriveEnvelope::pulsed); });
        t.columns = {"t_fs", "n_s", "n_vu", "n_vl", "n_ir", "g2_cross"};
        for (std::size_t i = 0; i < tr.t.size(); ++i)
            t.rows.push_back({tr.t[i], tr.n_s[i], tr.n_vu[i], tr.n_vl[i], tr.n_ir[i], tr.g2_cross_t[i]});
        t.metadata.push_back({"n0", format_value(*sc.n0)});
        t.metadata.push_back({"photons_vis", format_value(tr.photons_per_pulse_vis)});
        t.metadata.push_back({"photons_ir", format_value(tr.photons_per_pulse_ir)});
        t.metadata.push_back({"window_fs", format_value(tr.window)});
        t.metadata.push_back({"dt_fs", format_value(tr.dt)});
        return t;
    }
    const auto pumps = log_grid(*sc.pump_min, *sc.pump_max, sc.pump_points);
    t.columns = {"n0", "photons_vis", "photons_ir", "g2_cross_max", "window_fs"};
    std::vector<std::vector<double>> rows(pumps.size());
    parallel_for(pumps.size(), threads, [&](std::size_t i) {
        const auto tr = named(pumps[i], [&] { return evolve(m, pumps[i], fc, DriveEnvelope::pulsed); });
        double gmax = nan_v;
        for (double g : tr.g2_cross_t)
            if (!std::isnan(g))
                gmax = std::isnan(gmax) ? g : std::max(gmax, g);
        rows[i] = {pumps[i], tr.photons_per_pulse_vis, tr.photons_per_pulse_ir, gmax, tr.window};
    });
    t.rows = std::move(rows);
    return t;
}

} // namespace

std::vector<double> Range::values() const {
    const long n = long(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> v(std::size_t(std::max(n, 1L)));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = min + step * double(i);
    return v;
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto h = line.find('#'); h != std::string_view::npos)
            line = line.substr(0, h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": expected 'key = value'");
        if (!kv.emplace(key, value).second)
            throw ConfigError(where + ": duplicate key '" + key + "'");
    }

    Scenario sc;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto num = [&](const char* key) -> std::optional<double> {
        auto v = take(key);
        return v ? std::optional<double>(to_number(*v, key)) : std::nullopt;
    };
    auto range = [&](const char* name) -> std::optional<Range> {
        const std::string base(name);
        auto point = num(base.c_str());
        auto lo = num((base + "_min").c_str());
        auto hi = num((base + "_max").c_str());
        auto st = num((base + "_step").c_str());
        if (point) {
            if (lo || hi || st)
                throw ConfigError("scenario: give either " + base + " or its range, not both");
            return Range{*point, *point, 1.0};
        }
        if (!lo && !hi && !st)
            return std::nullopt;
        if (!lo || !hi || !st)
            throw ConfigError("scenario: " + base + "_min, " + base + "_max and " + base + "_step are all required");
        if (!(*st > 0.0))
            throw ConfigError("scenario: " + base + "_step must be positive");
        if (*hi < *lo)
            throw ConfigError("scenario: empty range for " + base);
        return Range{*lo, *hi, *st};
    };

    auto mode = take("mode");
    if (!mode)
        throw ConfigError("scenario: missing 'mode'");
    sc.mode = *mode;
    if (std::find(std::begin(kModes), std::end(kModes), sc.mode) == std::end(kModes))
        throw ConfigError("scenario: unknown mode '" + sc.mode + "'");
    sc.ki = range("ki");
    sc.kf = range("kf");
    sc.tau = range("tau_fs");
    sc.n_pump = num("n_pump");
    sc.n0 = num("n0");
    sc.pump_min = num("pump_min");
    sc.pump_max = num("pump_max");
    if (auto v = take("pump_points"))
        sc.pump_points = to_int(*v, "pump_points");
    if (auto v = take("filter")) {
        if (*v == "upper")
            sc.filter = IrFilter::upper;
        else if (*v == "lower")
            sc.filter = IrFilter::lower;
        else if (*v == "both")
            sc.filter = IrFilter::both;
        else
            throw ConfigError("scenario: filter must be upper, lower or both");
    }
    if (auto v = take("cutoff_s"))
        sc.cutoff_s = to_int(*v, "cutoff_s");
    if (auto v = take("cutoff_vu"))
        sc.cutoff_vu = to_int(*v, "cutoff_vu");
    if (auto v = take("cutoff_vl"))
        sc.cutoff_vl = to_int(*v, "cutoff_vl");
    if (auto v = num("dt_fs"))
        sc.dt = *v;
    if (auto v = num("t_end_fs"))
        sc.t_end = *v;
    sc.output = take("output").value_or(sc.mode);
    if (sc.output.empty() || sc.output.find_first_of("/\\") != std::string::npos)
        throw ConfigError("scenario: output must be a plain file name");
    if (!kv.empty())
        throw ConfigError("scenario: unknown key '" + kv.begin()->first + "'");

    // mode requirements
    const auto& m = sc.mode;
    if (!sc.ki)
        throw ConfigError("scenario: mode " + m + " needs a k_i grid (ki or ki_min/ki_max/ki_step)");
    if (needs_pair_grid(m) && !sc.kf)
        throw ConfigError("scenario: mode " + m + " needs a k_f grid (kf or kf_min/kf_max/kf_step)");
    if (needs_pump(m)) {
        if (!sc.n_pump)
            throw ConfigError("scenario: mode " + m + " needs n_pump");
        if (!(*sc.n_pump > 0.0))
            throw ConfigError("scenario: n_pump must be positive");
    }
    if (m == "g2-trace") {
        if (!sc.tau)
            throw ConfigError("scenario: mode g2-trace needs tau_fs_min/tau_fs_max/tau_fs_step");
        if (sc.tau->min < 0.0)
            throw ConfigError("scenario: tau must be nonnegative");
    }
    auto single_point = [&] {
        if (sc.ki->values().size() != 1 || sc.kf->values().size() != 1)
            throw ConfigError("scenario: mode " + m + " takes a single (ki, kf) point");
    };
    auto pump_grid = [&] {
        if (!sc.pump_min || !sc.pump_max || sc.pump_points < 1)
            throw ConfigError("scenario: mode " + m + " needs pump_min, pump_max and pump_points");
        if (!(*sc.pump_min > 0.0) || *sc.pump_max < *sc.pump_min)
            throw ConfigError("scenario: pump range must satisfy 0 < pump_min <= pump_max");
    };
    if (m == "rates-sweep") {
        single_point();
        pump_grid();
    }
    if (m == "pulse") {
        single_point();
        if (sc.n0) {
            if (!(*sc.n0 >= 0.0))
                throw ConfigError("scenario: n0 must be nonnegative");
        } else {
            pump_grid();
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

Table run_scenario(const Scenario& sc, const SystemParams& p, int threads) {
    validate(p);
    Table t;
    const auto& m = sc.mode;
    if (m == "dispersion")
        t = run_dispersion(sc, p);
    else if (m == "threshold-map")
        t = run_threshold_map(sc, p, threads);
    else if (m == "g2-trace")
        t = run_g2_trace(sc, p, threads);
    else if (m == "rates-sweep")
        t = run_rates_sweep(sc, p, threads);
    else if (m == "pulse")
        t = run_pulse(sc, p, threads);
    else
        t = run_pair_map(sc, p, threads);
    t.scenario = m;
    if (needs_pump(m))
        t.metadata.insert(t.metadata.begin(), {"n_pump", format_value(*sc.n_pump)});
    return t;
}

std::string format_value(double v) {
    if (std::isnan(v))
        return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::ostringstream out;
    out << "# polariton-optomech v" << version() << " scenario=" << t.scenario;
    for (const auto& [k, v] : t.metadata)
        out << " " << k << "=" << v;
    out << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_value(row[i]);
        out << "\n";
    }
    return out.str();
}

std::string to_json(const Table& t) {
    using json = nlohmann::ordered_json;
    auto cell = [](double v) -> json {
        if (std::isnan(v))
            return nullptr;
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        return std::stod(format_value(v));
    };
    json j;
    j["format"] = "polariton-optomech";
    j["version"] = version();
    j["scenario"] = t.scenario;
    json meta = json::object();
    for (const auto& [k, v] : t.metadata)
        meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (double v : row)
            r.push_back(cell(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

std::pair<std::string, std::string> write_outputs(const Table& t, const std::string& dir, const std::string& base) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    const std::string csv = (fs::path(dir) / (base + ".csv")).string();
    const std::string js = (fs::path(dir) / (base + ".json")).string();
    for (const auto& [path, body] : {std::pair{csv, to_csv(t)}, std::pair{js, to_json(t)}}) {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw ConfigError("failed to open for writing: " + path);
        out << body;
        if (!out)
            throw ConfigError("failed to write: " + path);
    }
    return {csv, js};
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            {
                std::lock_guard lock(mu);
                if (i > failed_at)
                    return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("POLOM_THREADS")) {
        int v = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
            throw ConfigError("POLOM_THREADS must be a positive integer");
        return v;
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

} // namespace polom
