#include "oracles.hpp"

#include "polom/correlations.hpp"
#include "polom/entanglement.hpp"
#include "polom/errors.hpp"
#include "polom/units.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace polom;
using doctest::Approx;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> v;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        v.push_back(lo + i * step);
    return v;
}

} // namespace

TEST_CASE("heralded autocorrelation") {
    CHECK(g2_heralded(2.0) == Approx(1.5).epsilon(1e-15));
    CHECK(g2_heralded(20.0) == Approx(0.195).epsilon(1e-15));
    CHECK(g2_heralded(1.0) == Approx(2.0).epsilon(1e-15));
    CHECK(g2_heralded(1e6) < 1e-5);
    CHECK(g2_heralded(1e6) > 0.0);
    CHECK_THROWS_AS(g2_heralded(0.99), DomainError);

    std::mt19937_64 rng(61);
    for (int i = 0; i < 300; ++i) {
        const double g = std::exp(oracle::uniform(rng, 0.0, std::log(1e3)));
        CHECK(g2_heralded(g) == Approx(4.0 / g - 2.0 / (g * g)).epsilon(1e-15));
    }
}

TEST_CASE("Cauchy-Schwarz witness") {
    CHECK_FALSE(cauchy_schwarz_violated(2.0));
    CHECK(cauchy_schwarz_violated(2.01));
    CHECK_FALSE(cauchy_schwarz_violated(1.5));
}

TEST_CASE("cross-correlation limits") {
    const auto p = default_params();
    auto modes = pair_modes(1.0, 0.4, p);
    modes.g_upper = modes.g_lower = 0.0;
    // the visible mode is empty without coupling, so give it a background floor
    const auto dec = steady_covariance(assemble_system(modes, 1630.0));
    for (double tau : {0.0, 50.0, 500.0})
        CHECK(g2_cross(dec, modes.phi, tau, 1e-6, 0.0) == 1.0);
    CHECK(quantum_efficiency(dec) < 1e-40);

    // bunching grows as the pump weakens; thermal phonons keep the weak-pump limit finite
    const auto weak = steady_covariance(build_system(1.0, 0.4, 1.0, p));
    double prev = g2_cross(weak, weak.system.modes.phi, 0.0, 0.0, 0.0);
    CHECK(prev > 50.0);
    for (double n : {100.0, 1630.0, 1e5, 1e7}) {
        const auto c = steady_covariance(build_system(1.0, 0.4, n, p));
        const double g = g2_cross(c, c.system.modes.phi, 0.0, 0.0, 0.0);
        CHECK(g < prev);
        prev = g;
    }
    CHECK_THROWS_AS(g2_cross(weak, 0.3, -1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(quantum_efficiency(steady_covariance(build_system(1.0, 0.4, 0.0, p))), DomainError);
}

TEST_CASE("quantum beats at the operating point") {
    const auto p = default_params();
    const auto cov = steady_covariance(build_system(1.0, 0.4, 1630.0, p));
    const auto& m = cov.system.modes;
    const auto taus = grid(0.0, 3000.0, 2.0);
    const auto both = g2_cross_trace(cov, m.phi, taus, p.n_bg_vis, p.n_bg_ir, IrFilter::both);
    const double expect = units::rate(m.omega_vu - m.omega_vl);
    CHECK(dominant_beat_frequency(both) == Approx(expect).epsilon(0.01));
    CHECK(modulation_depth(both) > 0.1);

    for (auto f : {IrFilter::upper, IrFilter::lower}) {
        const auto tr = g2_cross_trace(cov, m.phi, taus, p.n_bg_vis, p.n_bg_ir, f);
        CHECK(modulation_depth(tr) < 1e-3);
        double last_max = INFINITY;
        for (std::size_t i = 1; i + 1 < tr.g2_cross.size(); ++i)
            if (tr.g2_cross[i] >= tr.g2_cross[i - 1] && tr.g2_cross[i] >= tr.g2_cross[i + 1]) {
                CHECK(tr.g2_cross[i] <= last_max);
                last_max = tr.g2_cross[i];
            }
    }
}

TEST_CASE("g2 bounds and entanglement equivalence (randomized)") {
    std::mt19937_64 rng(67);
    int entangled = 0, violating = 0;
    for (int i = 0; i < 250; ++i) {
        const auto sys = oracle::random_stable_system(rng);
        const auto cov = steady_covariance(sys);
        const double phi = sys.modes.phi;
        for (double tau : {0.0, oracle::uniform(rng, 0.0, 2000.0)})
            for (auto f : {IrFilter::upper, IrFilter::lower, IrFilter::both})
                CHECK(g2_cross(cov, phi, tau, 1e-6, 1e-3, f) >= 1.0);
        const double g = g2_cross(cov, phi, 0.0, 0.0, 0.0);
        const double en = log_negativity(vis_ir_reduce(cov, phi, 0.0, 0.0));
        if (std::abs(g - 2.0) > 1e-9) {
            CHECK((en > 0.0) == (g > 2.0));
        }
        const double gb = g2_cross(cov, phi, 0.0, 1e-4, 1e-2);
        if (log_negativity(vis_ir_reduce(cov, phi, 1e-4, 1e-2)) > 0.0)
            CHECK(gb > 2.0);
        entangled += en > 0.0;
        violating += g > 2.0;
    }
    CHECK(entangled > 10);
    CHECK(violating > 10);
}

TEST_CASE("matching locus") {
    const auto p = default_params();
    for (auto br : {PhononBranch::upper, PhononBranch::lower}) {
        const auto roots = matching_locus(1.0, br, p);
        REQUIRE(!roots.empty());
        for (double kf : roots)
            CHECK(std::abs(matching_detuning(1.0, kf, br, p)) < 1e-6);
    }
    // the pulsed operating point (1, 0.4) sits between the upper- and lower-branch loci
    const double du = matching_detuning(1.0, 0.4, PhononBranch::upper, p);
    const double dl = matching_detuning(1.0, 0.4, PhononBranch::lower, p);
    CHECK(du < 0.0);
    CHECK(dl > 0.0);

    // continuity in k_i
    for (auto br : {PhononBranch::upper, PhononBranch::lower}) {
        std::vector<double> prev = matching_locus(0.4, br, p);
        for (double ki = 0.4005; ki <= 1.4; ki += 5e-4) {
            const auto cur = matching_locus(ki, br, p);
            CHECK(cur.size() == prev.size());
            for (double r : cur) {
                double best = INFINITY;
                for (double q : prev)
                    best = std::min(best, std::abs(r - q));
                CHECK(best <= 1e-3);
            }
            prev = cur;
        }
    }
}

TEST_CASE("quantum efficiency peaks near the locus") {
    const auto p = default_params();
    const double on = matching_locus(1.0, PhononBranch::upper, p).front();
    auto qe = [&](double kf) { return quantum_efficiency(steady_covariance(build_system(1.0, kf, 1630.0, p))); };
    CHECK(qe(on) > 10.0 * qe(on + 0.2));
    CHECK(qe(on) > 10.0 * qe(on - 0.2));
}

TEST_CASE("emission rates") {
    const auto p = default_params();
    const auto c0 = steady_covariance(build_system(1.0, 0.4, 0.0, p));
    const auto r0 = emission_rates(c0);
    CHECK(r0.vis_rate < 1e-20);
    CHECK(r0.excess_ir_rate == 0.0);
    CHECK(r0.ir_rate > 0.0);

    // lower-branch locus: the phonon-polariton is mostly IR photon, so every
    // visible photon comes with nearly one IR photon
    for (double kf : matching_locus(1.0, PhononBranch::lower, p)) {
        if (kf < 0.0)
            continue;
        const auto r = emission_rates(steady_covariance(build_system(1.0, kf, 1630.0, p)));
        CHECK(r.excess_ir_rate == Approx(r.vis_rate).epsilon(0.2));
    }

    // linear response far below threshold
    const double thr = instability_threshold(1.0, 0.564, p);
    std::vector<double> x, y;
    for (int i = 1; i <= 10; ++i) {
        const double n = 1e-4 * thr * i;
        x.push_back(n);
        y.push_back(emission_rates(steady_covariance(build_system(1.0, 0.564, n, p))).vis_rate);
    }
    double mx = 0, my = 0;
    for (int i = 0; i < 10; ++i) {
        mx += x[i] / 10;
        my += y[i] / 10;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 10; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    CHECK(sxy * sxy / (sxx * syy) > 0.999);
}

TEST_CASE("pair balance: visible flux equals phonon-polariton creation (randomized)") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 200; ++i) {
        const auto sys = oracle::random_stable_system(rng);
        if (sys.n_pump == 0.0)
            continue;
        const auto cov = steady_covariance(sys);
        const auto& m = sys.modes;
        const double created = m.gamma_vu * (cov.n_vu() - m.nth_vu) + m.gamma_vl * (cov.n_vl() - m.nth_vl);
        const double emitted = m.gamma_s * (cov.n_s() - m.nth_s);
        CHECK(created == Approx(emitted).epsilon(1e-6));
    }
}
