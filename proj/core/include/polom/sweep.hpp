#pragma once

#include "polom/correlations.hpp"
#include "polom/errors.hpp"
#include "polom/params.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polom {

const char* version();

/// Inclusive grid min, min + step, ..., <= max.
struct Range {
    double min = 0.0, max = 0.0, step = 1.0;
    std::vector<double> values() const;
};

struct Scenario {
    std::string mode;
    std::optional<Range> ki, kf;
    std::optional<double> n_pump;
    std::optional<double> n0;
    std::optional<Range> tau;  // fs
    IrFilter filter = IrFilter::both;
    // pump sweeps, log-spaced
    std::optional<double> pump_min, pump_max;
    int pump_points = 0;
    // master-equation settings
    int cutoff_s = 6, cutoff_vu = 6, cutoff_vl = 6;
    double dt = 0.0, t_end = 0.0;
    std::string output;  // base file name, defaults to the mode
};

/// Parses and checks `key = value` scenario text. Throws ConfigError.
Scenario parse_scenario(std::string_view text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);

/// Grid point evaluation failed with an invalid state.
class GridPointError : public InvalidStateError {
public:
    using InvalidStateError::InvalidStateError;
};

/// Result of a run. NaN cells are written as empty fields.
struct Table {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table run_scenario(const Scenario& sc, const SystemParams& p, int threads);

/// Nine significant digits, empty for NaN.
std::string format_value(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

/// Writes <dir>/<base>.csv and <dir>/<base>.json; returns the two paths.
std::pair<std::string, std::string> write_outputs(const Table& t, const std::string& dir, const std::string& base);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Explicit value if positive, else POLOM_THREADS, else hardware concurrency.
int resolve_threads(int requested);

} // namespace polom
