#pragma once

#include "polom/langevin.hpp"
#include "polom/params.hpp"

#include <vector>

namespace polom {

/// Which phonon-polariton pathway feeds the IR detector.
enum class IrFilter { upper, lower, both };

enum class PhononBranch { upper, lower };

/// Stationary IR output occupation for the given pathway.
double ir_occupation(const CovarianceSet& cov, double phi, IrFilter filter);

/// Normalized visible/IR cross-correlation with the visible photon detected first.
double g2_cross(const CovarianceSet& cov, double phi, double tau, double n_bg_vis, double n_bg_ir,
                IrFilter filter = IrFilter::both);

struct CorrelationTrace {
    std::vector<double> tau;  // fs
    std::vector<double> g2_cross;
    IrFilter filter = IrFilter::both;
};

CorrelationTrace g2_cross_trace(const CovarianceSet& cov, double phi, const std::vector<double>& tau,
                                double n_bg_vis, double n_bg_ir, IrFilter filter);

/// Angular frequency (rad/fs) of the strongest nonzero spectral line of g2 - 1,
/// from a zero-padded DFT refined by parabolic interpolation. Requires a uniform grid.
double dominant_beat_frequency(const CorrelationTrace& trace);

/// Largest deviation of g2 - 1 from a single-exponential fit, relative to its value at the first sample.
double modulation_depth(const CorrelationTrace& trace);

/// Second-order autocorrelation of IR light heralded by a visible detection.
double g2_heralded(double g2c);

bool cauchy_schwarz_violated(double g2c);

/// Emitted lower-polariton flux over absorbed pump flux.
double quantum_efficiency(const CovarianceSet& cov);

/// k_f roots of omega_U(k_i) = omega_L(k_f) + omega_branch(k_i - k_f) on [-3, 3] um^-1.
std::vector<double> matching_locus(double k_i, PhononBranch branch, const SystemParams& p);

/// Energy mismatch omega_U(k_i) - omega_L(k_f) - omega_branch(k_i - k_f), eV.
double matching_detuning(double k_i, double k_f, PhononBranch branch, const SystemParams& p);

struct EmissionRates {
    double vis_rate = 0.0;       // photons/s
    double ir_rate = 0.0;        // photons/s
    double excess_ir_rate = 0.0; // ir_rate minus the unpumped thermal value
};

EmissionRates emission_rates(const CovarianceSet& cov);

} // namespace polom
