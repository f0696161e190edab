#include "oracles.hpp"

#include "polom/sweep.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace polom;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

fs::path scratch_dir(const std::string& tag) {
    const auto d = fs::temp_directory_path() / ("polom_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("scenario parsing") {
    const auto sc = parse_scenario("# map\nmode = g2-map\nki_min = 0.4\nki_max = 0.8\nki_step = 0.2\n"
                                   "kf = 0.5   # single value\nn_pump = 1630\nfilter = upper\n");
    CHECK(sc.mode == "g2-map");
    CHECK(sc.ki->values().size() == 3);
    CHECK(sc.kf->values().size() == 1);
    CHECK(*sc.n_pump == 1630.0);
    CHECK(sc.filter == IrFilter::upper);
    CHECK(sc.output == "g2-map");

    const char* bad[] = {
        "",                                                   // no mode
        "mode = warp\nki = 1",                                // unknown mode
        "mode = dispersion\nki = 1\nki = 2",                  // duplicate
        "mode = dispersion\nki = 1\ncolour = red",            // unknown key
        "mode = dispersion\nki = abc",                        // not a number
        "mode = dispersion\nki_min = 0\nki_max = 1",          // incomplete range
        "mode = dispersion\nki_min = 0\nki_max = 1\nki_step = 0",
        "mode = dispersion\nki_min = 1\nki_max = 0\nki_step = 0.1",
        "mode = dispersion\nki = 1\nki_min = 0\nki_max = 1\nki_step = 0.1",
        "mode = g2-map\nki = 1\nkf = 0.4",                    // no pump
        "mode = g2-map\nki = 1\nkf = 0.4\nn_pump = -3",
        "mode = qe-map\nki = 1\nn_pump = 10",                 // no kf
        "mode = g2-trace\nki = 1\nkf = 0.4\nn_pump = 10",     // no tau grid
        "mode = rates-sweep\nki_min = 0.4\nki_max = 1\nki_step = 0.2\nkf = 0.4\npump_min = 1\npump_max = 10\npump_points = 3",
        "mode = rates-sweep\nki = 1\nkf = 0.4\npump_min = 10\npump_max = 1\npump_points = 3",
        "mode = pulse\nki = 1\nkf = 0.4\nn0 = -1",
        "mode = dispersion\nki = 1\nfilter = sideways",
        "mode = dispersion\nki = 1\noutput = ../x",
        "mode = dispersion\nki = 1\ncutoff_s = 2.5",
        "mode dispersion",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_scenario(text), ConfigError);
    }
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.txt"), ConfigError);
}

TEST_CASE("range values") {
    CHECK(Range{0.4, 1.4, 0.02}.values().size() == 51);
    CHECK(Range{0.0, 1.4, 0.02}.values().size() == 71);
    CHECK(Range{1.0, 1.0, 0.5}.values().size() == 1);
    const auto v = Range{0.0, 0.95, 0.1}.values();
    CHECK(v.size() == 10);
    CHECK(v.back() == doctest::Approx(0.9));
}

TEST_CASE("value formatting") {
    CHECK(format_value(1.0) == "1");
    CHECK(format_value(1630.0) == "1630");
    CHECK(format_value(0.1234567891234) == "0.123456789");
    CHECK(format_value(9.095339e7) == "90953390");
    CHECK(format_value(std::nan("")).empty());
    CHECK(format_value(HUGE_VAL) == "inf");
}

TEST_CASE("CSV and JSON tables") {
    const auto p = default_params();
    const auto sc = parse_scenario("mode = g2-map\nki_min = 0.9\nki_max = 1.0\nki_step = 0.1\nkf = 0.4\nn_pump = 1e12\n");
    const auto t = run_scenario(sc, p, 1);
    REQUIRE(t.rows.size() == 2);
    const auto csv = lines_of(to_csv(t));
    REQUIRE(csv.size() == 4);
    CHECK(csv[0] == std::string("# polariton-optomech v") + version() + " scenario=g2-map n_pump=1e+12");
    CHECK(csv[1] == "k_i,k_f,stable,g2_cross0,g2_cross0_nobg,g2_heralded,cs_violated");
    // far above threshold every point is flagged and its cells are empty
    for (int r = 2; r < 4; ++r) {
        const auto f = fields(csv[r]);
        REQUIRE(f.size() == 7);
        CHECK(f[2] == "0");
        for (int c = 3; c < 7; ++c)
            CHECK(f[c].empty());
    }
    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j["scenario"] == "g2-map");
    CHECK(j["version"] == version());
    CHECK(j["metadata"]["n_pump"] == "1e+12");
    CHECK(j["rows"][0][3].is_null());

    const auto ok = run_scenario(parse_scenario("mode = threshold-map\nki = 1\nkf = 0.4\n"), p, 1);
    const auto jj = nlohmann::json::parse(to_json(ok));
    const auto f = fields(lines_of(to_csv(ok))[2]);
    CHECK(std::stod(f[2]) == jj["rows"][0][2].get<double>());
    CHECK(std::stod(f[2]) == doctest::Approx(9.095e7).epsilon(0.01));
}

TEST_CASE("randomized scenarios are deterministic and thread independent") {
    const auto p = default_params();
    std::mt19937_64 rng(4242);
    const char* modes[] = {"dispersion", "logneg-polariton", "logneg-visir", "g2-map", "qe-map", "g2-trace", "rates-sweep"};
    for (int i = 0; i < 210; ++i) {
        const std::string mode = modes[i % 7];
        std::ostringstream s;
        s.precision(17);
        const double ki0 = oracle::uniform(rng, 0.2, 1.4);
        const double kf0 = oracle::uniform(rng, -0.5, 1.4);
        s << "mode = " << mode << "\n";
        if (mode == "rates-sweep" || mode == "g2-trace") {
            s << "ki = " << ki0 << "\nkf = " << kf0 << "\n";
        } else {
            s << "ki_min = " << ki0 << "\nki_max = " << ki0 + 0.1 << "\nki_step = 0.05\n";
            if (mode != "dispersion")
                s << "kf_min = " << kf0 << "\nkf_max = " << kf0 + 0.05 << "\nkf_step = 0.05\n";
        }
        const double n = std::pow(10.0, oracle::uniform(rng, 2.0, 9.0));
        if (mode != "dispersion" && mode != "rates-sweep")
            s << "n_pump = " << n << "\n";
        if (mode == "g2-trace")
            s << "tau_fs_min = 0\ntau_fs_max = 200\ntau_fs_step = 25\n";
        if (mode == "rates-sweep")
            s << "pump_min = 100\npump_max = " << n << "\npump_points = 4\n";
        CAPTURE(s.str());
        const auto sc = parse_scenario(s.str());
        const auto a = run_scenario(sc, p, 1);
        const auto b = run_scenario(sc, p, 3);
        const auto c = run_scenario(sc, p, 1);
        CHECK(to_csv(a) == to_csv(b));
        CHECK(to_csv(a) == to_csv(c));
        CHECK(to_json(a) == to_json(b));
        // every row has one cell per column and the JSON mirrors the CSV
        const auto csv = lines_of(to_csv(a));
        const auto j = nlohmann::json::parse(to_json(a));
        REQUIRE(csv.size() == a.rows.size() + 2);
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            const auto f = fields(csv[r + 2]);
            REQUIRE(f.size() == a.columns.size());
            for (std::size_t k = 0; k < f.size(); ++k) {
                const auto& cell = j["rows"][r][k];
                if (f[k].empty())
                    CHECK(cell.is_null());
                else if (cell.is_string())
                    CHECK(cell.get<std::string>() == f[k]);
                else
                    CHECK(cell.get<double>() == std::stod(f[k]));
            }
        }
    }
}

TEST_CASE("parallel_for reports the lowest failing index") {
    for (int threads : {1, 2, 4}) {
        std::vector<int> hit(50, 0);
        parallel_for(50, threads, [&](std::size_t i) { hit[i] += 1; });
        CHECK(std::count(hit.begin(), hit.end(), 1) == 50);
        try {
            parallel_for(50, threads, [&](std::size_t i) {
                if (i == 7 || i == 31)
                    throw InvalidStateError("bad " + std::to_string(i));
            });
            FAIL("no exception");
        } catch (const InvalidStateError& e) {
            CHECK(std::string(e.what()) == "bad 7");
        }
    }
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("output files") {
    const auto dir = scratch_dir("out");
    const auto t = run_scenario(parse_scenario("mode = dispersion\nki = 0\n"), default_params(), 1);
    const auto [csv, js] = write_outputs(t, (dir / "nested").string(), "disp");
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == to_csv(t));
    CHECK(fs::exists(js));
    fs::remove_all(dir);
}

#ifdef POLOM_SIMULATE_EXE
TEST_CASE("command line exit codes") {
    const auto dir = scratch_dir("cli");
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream(dir / name) << body;
        return (dir / name).string();
    };
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(POLOM_SIMULATE_EXE) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const auto good = write("good.txt", "mode = dispersion\nki_min = 0\nki_max = 1\nki_step = 0.5\noutput = disp\n");
    CHECK(run("--scenario " + good + " --out " + (dir / "res").string()) == 0);
    CHECK(fs::exists(dir / "res" / "disp.csv"));
    CHECK(fs::exists(dir / "res" / "disp.json"));

    CHECK(run("--scenario " + (dir / "missing.txt").string()) == 2);
    CHECK(run("--scenario " + write("bad.txt", "mode = nothing\n")) == 2);
    CHECK(run("--scenario " + good + " --params " + write("p.txt", "n_eff = -2\n")) == 2);
    CHECK(run("--bogus-flag") == 2);
    CHECK(run("") == 2);

    const auto trunc = write("trunc.txt", "mode = pulse\nki = 1\nkf = 0.564\nn0 = 4e7\ncutoff_s = 3\ncutoff_vu = 3\ncutoff_vl = 3\n");
    CHECK(run("--scenario " + trunc + " --out " + (dir / "res").string()) == 3);
    fs::remove_all(dir);
}
#endif
