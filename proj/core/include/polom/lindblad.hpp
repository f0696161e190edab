#pragma once

#include "polom/langevin.hpp"
#include "polom/params.hpp"

#include <Eigen/Core>
#include <array>
#include <complex>
#include <vector>

namespace polom {

struct FockConfig {
    int cutoff_s = 6, cutoff_vu = 6, cutoff_vl = 6;  // number of Fock levels per mode
    double dt = 0.0;     // fs; 0 selects the stability bound, larger values are clamped to it
    double t_end = 0.0;  // fs; 0 selects 20/gamma_pump (pulsed) or 40/min(gamma) (constant drive)
    int max_samples = 2000;
    bool keep_final_state = false;
};

/// Throws ConfigError on invalid settings.
void validate(const FockConfig& fc);

enum class DriveEnvelope { pulsed, constant };

/// Dense density matrix on the product space, index ((n_s * N_u) + n_u) * N_l + n_l.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(int cutoff_s, int cutoff_vu, int cutoff_vl);

    static DensityMatrix from_state_vector(int cutoff_s, int cutoff_vu, int cutoff_vl, const Eigen::VectorXcd& psi);

    int index(int ns, int nu, int nl) const { return (ns * dims_[1] + nu) * dims_[2] + nl; }
    const std::array<int, 3>& dims() const { return dims_; }
    int size() const { return dims_[0] * dims_[1] * dims_[2]; }

    Eigen::MatrixXcd& matrix() { return rho_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

private:
    std::array<int, 3> dims_{1, 1, 1};
    Eigen::MatrixXcd rho_ = Eigen::MatrixXcd::Ones(1, 1);
};

/// Low-order moments of a three-mode state, with a_IR = vL cos(phi) + vU sin(phi).
struct FockMoments {
    double n_s = 0.0, n_vu = 0.0, n_vl = 0.0, n_ir = 0.0;
    std::complex<double> vu_dag_vl;  // <vU+ vL>
    double pair_moment = 0.0;        // <s+ a_IR+ a_IR s>
    double trace = 0.0;
};

FockMoments fock_moments(const DensityMatrix& rho, double phi);

/// <s+ a+ a s> / (<s+ s> <a+ a>) computed directly from the state.
double g2_cross_equal_time(const DensityMatrix& rho, double phi);

struct PulseTrajectory {
    std::vector<double> t;  // fs
    std::vector<double> n_s, n_vu, n_vl, n_ir;
    std::vector<double> g2_cross_t;  // NaN where either occupation is below 1e-12
    double photons_per_pulse_vis = 0.0;
    double photons_per_pulse_ir = 0.0;
    double window = 0.0;   // integration window, fs
    double dt = 0.0;       // step actually used, fs
    double max_top_population = 0.0;
    double max_trace_error = 0.0;
    std::size_t stored_elements = 0;  // density-matrix entries kept by the solver
    DensityMatrix final_state;        // filled when FockConfig::keep_final_state is set
};

/// Master-equation evolution from s vacuum and thermal phonon-polaritons with
/// collective couplings g * sqrt(n0) * envelope(t).
PulseTrajectory evolve(const ModeSet& modes, double n0, const FockConfig& fc, DriveEnvelope envelope);

/// Pulsed drive with envelope exp(-gamma_pump t / 2).
PulseTrajectory evolve_pulse(double k_i, double k_f, double n0, const SystemParams& p, const FockConfig& fc);

} // namespace polom
