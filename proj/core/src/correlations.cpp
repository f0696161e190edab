#include "polom/correlations.hpp"

#include "polom/dispersion.hpp"
#include "polom/errors.hpp"
#include "polom/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace polom {

namespace {

struct IrWeights {
    double upper, lower;
};

IrWeights weights(double phi, IrFilter filter) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    switch (filter) {
    case IrFilter::upper:
        return {s, 0.0};
    case IrFilter::lower:
        return {0.0, c};
    case IrFilter::both:
        break;
    }
    return {s, c};
}

} // namespace

double ir_occupation(const CovarianceSet& cov, double phi, IrFilter filter) {
    const auto [wu, wl] = weights(phi, filter);
    const auto& m = cov.second_moments;
    return (wl * wl * m(idx_vl_dag, idx_vl) + wu * wu * m(idx_vu_dag, idx_vu) +
            wu * wl * (m(idx_vu_dag, idx_vl) + m(idx_vl_dag, idx_vu)))
        .real();
}

double g2_cross(const CovarianceSet& cov, double phi, double tau, double n_bg_vis, double n_bg_ir,
                IrFilter filter) {
    if (!(n_bg_vis >= 0.0) || !(n_bg_ir >= 0.0))
        throw DomainError("background occupations must be nonnegative");
    const auto [wu, wl] = weights(phi, filter);
    const Matrix6cd k = two_time_covariance(cov, tau);
    // <a_IR(t + tau) s(t)>; the pump-frame phase of s only multiplies this by a unit
    // modulus factor, so its magnitude is frame independent.
    const std::complex<double> anomalous = wu * k(idx_vu, idx_s) + wl * k(idx_vl, idx_s);
    const double den = (cov.n_s() + n_bg_vis) * (ir_occupation(cov, phi, filter) + n_bg_ir);
    if (!(den > 0.0))
        throw InvalidStateError("cross-correlation undefined: zero visible or IR occupation");
    return 1.0 + std::norm(anomalous) / den;
}

CorrelationTrace g2_cross_trace(const CovarianceSet& cov, double phi, const std::vector<double>& tau,
                                double n_bg_vis, double n_bg_ir, IrFilter filter) {
    CorrelationTrace t;
    t.tau = tau;
    t.filter = filter;
    t.g2_cross.reserve(tau.size());
    for (double x : tau)
        t.g2_cross.push_back(g2_cross(cov, phi, x, n_bg_vis, n_bg_ir, filter));
    return t;
}

double dominant_beat_frequency(const CorrelationTrace& trace) {
    const std::size_t n = trace.tau.size();
    if (n < 8 || trace.g2_cross.size() != n)
        throw DomainError("beat analysis needs at least 8 samples");
    const double dt = (trace.tau.back() - trace.tau.front()) / double(n - 1);
    if (!(dt > 0.0))
        throw DomainError("beat analysis needs an increasing time grid");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
        y[i] = (trace.g2_cross[i] - 1.0) * w;
    }
    constexpr int pad = 8;
    const std::size_t bins = pad * n / 2;
    const double dw = 2.0 * std::numbers::pi / (dt * double(pad * n));
    std::vector<double> mag(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const std::complex<double> step = std::polar(1.0, -dw * double(b) * dt);
        std::complex<double> ph = 1.0, acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += y[i] * ph;
            ph *= step;
        }
        mag[b] = std::abs(acc);
    }
    // skip the lobe around zero frequency
    std::size_t start = 1;
    while (start + 1 < bins && mag[start] <= mag[start - 1])
        ++start;
    if (start + 1 >= bins)
        throw DomainError("no spectral line beyond zero frequency");
    const auto peak = std::size_t(std::max_element(mag.begin() + long(start), mag.end() - 1) - mag.begin());
    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double den = a - 2.0 * b + c;
    const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    return (double(peak) + shift) * dw;
}

double modulation_depth(const CorrelationTrace& trace) {
    const std::size_t n = trace.tau.size();
    if (n < 3 || trace.g2_cross.size() != n)
        throw DomainError("modulation depth needs at least 3 samples");
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trace.tau[i];
        const double ly = std::log(std::max(trace.g2_cross[i] - 1.0, 1e-300));
        st += t;
        sy += ly;
        stt += t * t;
        sty += t * ly;
    }
    const double slope = (double(n) * sty - st * sy) / (double(n) * stt - st * st);
    const double icpt = (sy - slope * st) / double(n);
    const double y0 = trace.g2_cross.front() - 1.0;
    if (!(y0 > 0.0))
        throw DomainError("modulation depth undefined for an uncorrelated trace");
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        dev = std::max(dev, std::abs(trace.g2_cross[i] - 1.0 - std::exp(icpt + slope * trace.tau[i])));
    return dev / y0;
}

double g2_heralded(double g2c) {
    if (!(g2c >= 1.0))
        throw DomainError("heralded autocorrelation needs g2 >= 1");
    return 4.0 / g2c - 2.0 / (g2c * g2c);
}

bool cauchy_schwarz_violated(double g2c) { return g2c > 2.0; }

double quantum_efficiency(const CovarianceSet& cov) {
    const auto& sys = cov.system;
    if (!(sys.n_pump > 0.0))
        throw DomainError("quantum efficiency needs a nonzero pump");
    return sys.modes.gamma_s * cov.n_s() / (sys.modes.gamma_pump * sys.n_pump);
}

double matching_detuning(double k_i, double k_f, PhononBranch branch, const SystemParams& p) {
    const auto ini = exciton_polariton_basis(k_i, p);
    const auto fin = exciton_polariton_basis(k_f, p);
    const auto ph = phonon_polariton_basis(k_i - k_f, p);
    return ini.omega_u - fin.omega_l - (branch == PhononBranch::upper ? ph.omega_u : ph.omega_l);
}

std::vector<double> matching_locus(double k_i, PhononBranch branch, const SystemParams& p) {
    constexpr double lo = -3.0, hi = 3.0, step = 1e-3, tol = 1e-6;
    const double w_pump = exciton_polariton_basis(k_i, p).omega_u;
    auto f = [&](double kf) {
        const auto ph = phonon_polariton_basis(k_i - kf, p);
        return w_pump - exciton_polariton_basis(kf, p).omega_l - (branch == PhononBranch::upper ? ph.omega_u : ph.omega_l);
    };
    std::vector<double> roots;
    const int steps = int(std::lround((hi - lo) / step));
    double a = lo;
    double fa = f(a);
    for (int i = 1; i <= steps; ++i) {
        const double b = lo + step * i;
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if (fa * fb < 0.0) {
            double x0 = a, x1 = b, f0 = fa;
            while (x1 - x0 > tol) {
                const double mid = 0.5 * (x0 + x1);
                const double fm = f(mid);
                if (fm == 0.0) {
                    x0 = x1 = mid;
                    break;
                }
                if ((fm < 0.0) == (f0 < 0.0)) {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            roots.push_back(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0)
        roots.push_back(a);
    return roots;
}

EmissionRates emission_rates(const CovarianceSet& cov) {
    const auto& m = cov.system.modes;
    EmissionRates r;
    r.vis_rate = units::per_second(m.gamma_s, cov.n_s());
    r.ir_rate = units::per_second(m.gamma_ir, ir_occupation(cov, m.phi, IrFilter::both));
    const CovarianceSet base = steady_covariance(assemble_system(m, 0.0));
    r.excess_ir_rate = r.ir_rate - units::per_second(m.gamma_ir, ir_occupation(base, m.phi, IrFilter::both));
    return r;
}

} // namespace polom
