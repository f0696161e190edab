// simulate: parameter sweeps for the polariton optomechanics model.
#include "polom/params.hpp"
#include "polom/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Polariton optomechanics sweeps: writes <out>/<name>.csv and .json"};
    std::string scenario_path, params_path, out_dir = ".";
    int threads = 0;
    app.add_option("--scenario", scenario_path, "Scenario file (key = value)")->required();
    app.add_option("--params", params_path, "System parameter file (key = value); defaults if omitted");
    app.add_option("--threads", threads, "Worker threads (default: POLOM_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 2);
    }

    try {
        const polom::SystemParams params =
            params_path.empty() ? polom::default_params() : polom::load_config(params_path);
        const polom::Scenario sc = polom::load_scenario(scenario_path);
        const polom::Table table = polom::run_scenario(sc, params, polom::resolve_threads(threads));
        const auto [csv, json] = polom::write_outputs(table, out_dir, sc.output);
        std::cout << csv << "\n" << json << "\n";
        return 0;
    } catch (const polom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const polom::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const polom::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
