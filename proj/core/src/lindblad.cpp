#include "polom/lindblad.hpp"

#include "polom/errors.hpp"
#include "polom/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polom {

using cplx = std::complex<double>;

void validate(const FockConfig& fc) {
    if (fc.cutoff_s < 2 || fc.cutoff_vu < 2 || fc.cutoff_vl < 2)
        throw ConfigError("Fock cutoffs must be at least 2");
    if (long(fc.cutoff_s) * fc.cutoff_vu * fc.cutoff_vl > 4096)
        throw ConfigError("Fock space dimension exceeds 4096");
    if (!(fc.dt >= 0.0) || !(fc.t_end >= 0.0))
        throw ConfigError("dt and t_end must be nonnegative");
    if (fc.max_samples < 2)
        throw ConfigError("max_samples must be at least 2");
}

DensityMatrix::DensityMatrix(int cutoff_s, int cutoff_vu, int cutoff_vl)
    : dims_{cutoff_s, cutoff_vu, cutoff_vl}, rho_(Eigen::MatrixXcd::Zero(size(), size())) {
    rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_state_vector(int cutoff_s, int cutoff_vu, int cutoff_vl, const Eigen::VectorXcd& psi) {
    DensityMatrix d(cutoff_s, cutoff_vu, cutoff_vl);
    if (psi.size() != d.size())
        throw DomainError("state vector size does not match the Fock dimensions");
    const double nrm = psi.norm();
    if (!(nrm > 0.0))
        throw DomainError("state vector is zero");
    const Eigen::VectorXcd v = psi / nrm;
    d.rho_ = v * v.adjoint();
    return d;
}

namespace {

// Evaluates the moments from any element accessor rho(a, b) on flat indices.
template <class Access>
FockMoments moments_from(const std::array<int, 3>& n, double phi, Access&& rho) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    FockMoments m;
    double nsnu = 0, nsnl = 0;
    cplx ns_cross = 0.0;
    for (int a = 0; a < n[0]; ++a)
        for (int u = 0; u < n[1]; ++u)
            for (int l = 0; l < n[2]; ++l) {
                const int i = (a * n[1] + u) * n[2] + l;
                const double p = rho(i, i).real();
                m.trace += p;
                m.n_s += a * p;
                m.n_vu += u * p;
                m.n_vl += l * p;
                nsnu += double(a) * u * p;
                nsnl += double(a) * l * p;
                if (u + 1 < n[1] && l >= 1) {
                    const int j = (a * n[1] + u + 1) * n[2] + l - 1;
                    const cplx e = rho(i, j) * std::sqrt(double(u + 1) * l);
                    m.vu_dag_vl += e;
                    ns_cross += double(a) * e;
                }
            }
    m.n_ir = c * c * m.n_vl + s * s * m.n_vu + 2.0 * s * c * m.vu_dag_vl.real();
    m.pair_moment = s * s * nsnu + c * c * nsnl + 2.0 * s * c * ns_cross.real();
    return m;
}

// Density matrix stored as the blocks of fixed Q = n_s - n_u - n_l. The
// master equation conserves Q block-diagonality, and the initial state is diagonal.
struct BlockLayout {
    std::array<int, 3> n{};
    int q_min = 0;
    int blocks = 0;
    std::vector<int> block_of;  // per flat state
    std::vector<int> local_of;  // per flat state
    std::vector<std::vector<int>> states;
    std::vector<std::size_t> offset;
    std::size_t total = 0;

    explicit BlockLayout(const std::array<int, 3>& dims) : n(dims) {
        q_min = -(n[1] - 1) - (n[2] - 1);
        blocks = (n[0] - 1) - q_min + 1;
        const int d = n[0] * n[1] * n[2];
        block_of.resize(d);
        local_of.resize(d);
        states.resize(blocks);
        for (int a = 0; a < n[0]; ++a)
            for (int u = 0; u < n[1]; ++u)
                for (int l = 0; l < n[2]; ++l) {
                    const int i = flat(a, u, l);
                    const int b = a - u - l - q_min;
                    block_of[i] = b;
                    local_of[i] = int(states[b].size());
                    states[b].push_back(i);
                }
        offset.resize(blocks);
        for (int b = 0; b < blocks; ++b) {
            offset[b] = total;
            total += states[b].size() * states[b].size();
        }
    }

    int flat(int a, int u, int l) const { return (a * n[1] + u) * n[2] + l; }
    std::array<int, 3> occ(int i) const { return {i / (n[1] * n[2]), (i / n[2]) % n[1], i % n[2]}; }
    int dim(int b) const { return int(states[b].size()); }
};

struct Channel {
    int src_block = -1;
    std::vector<int> map;       // local index in the source block, -1 if absent
    std::vector<double> factor; // sqrt(rate) * matrix element
};

struct BlockOps {
    std::vector<cplx> diag;              // -i E - Gamma / 2
    std::vector<int> row_ptr, col;       // coupling Hamiltonian inside the block (CSR)
    std::vector<cplx> val;
    std::vector<Channel> channels;
};

struct JumpSpec {
    int mode;
    bool raise;
    double rate;
};

class MasterEquation {
public:
    MasterEquation(const BlockLayout& lay, const std::array<double, 3>& freq, cplx g_u, cplx g_l,
                   const std::vector<JumpSpec>& jumps)
        : lay_(lay), ops_(lay.blocks) {
        for (int b = 0; b < lay.blocks; ++b) {
            auto& op = ops_[b];
            const int d = lay.dim(b);
            op.diag.resize(d);
            op.row_ptr.push_back(0);
            for (int li = 0; li < d; ++li) {
                const int i = lay.states[b][li];
                const auto o = lay.occ(i);
                double energy = 0.0, loss = 0.0;
                for (int m = 0; m < 3; ++m)
                    energy += freq[m] * o[m];
                for (const auto& j : jumps) {
                    const int k = o[j.mode];
                    if (!j.raise)
                        loss += j.rate * k;
                    else if (k + 1 < lay.n[j.mode])
                        loss += j.rate * (k + 1);
                }
                op.diag[li] = cplx(-0.5 * loss, -energy);

                // <i| H |j> for H = G_u vU+ s+ + G_l vL+ s+ + h.c.
                auto add = [&](int ds, int du, int dl, cplx g, bool creation) {
                    const int a = o[0] - ds, u = o[1] - du, l = o[2] - dl;
                    if (a < 0 || u < 0 || l < 0 || a >= lay.n[0] || u >= lay.n[1] || l >= lay.n[2])
                        return;
                    // creation: |i> = s+ v+ |j>, amplitude sqrt(n_s(i)) sqrt(n_v(i))
                    // annihilation: |i> = s v |j>, amplitude sqrt(n_s(j)) sqrt(n_v(j))
                    const double nv_i = du != 0 ? o[1] : o[2];
                    const double nv_j = du != 0 ? u : l;
                    const double amp = creation ? std::sqrt(double(o[0]) * nv_i) : std::sqrt(double(a) * nv_j);
                    op.col.push_back(lay.local_of[lay.flat(a, u, l)]);
                    op.val.push_back(amp * (creation ? g : std::conj(g)));
                };
                add(1, 1, 0, g_u, true);
                add(-1, -1, 0, g_u, false);
                add(1, 0, 1, g_l, true);
                add(-1, 0, -1, g_l, false);
                op.row_ptr.push_back(int(op.col.size()));
            }

            for (const auto& j : jumps) {
                Channel ch;
                ch.map.assign(d, -1);
                ch.factor.assign(d, 0.0);
                const int step = j.raise ? -1 : 1;
                for (int li = 0; li < d; ++li) {
                    auto o = lay.occ(lay.states[b][li]);
                    // (L rho L+)_{ab} draws from rho_{a', b'} with a' = a + step e_mode
                    const int k = o[j.mode] + step;
                    if (k < 0 || k >= lay.n[j.mode])
                        continue;
                    const double elem = std::sqrt(double(j.raise ? o[j.mode] : k));
                    o[j.mode] = k;
                    const int src = lay.flat(o[0], o[1], o[2]);
                    ch.src_block = lay.block_of[src];
                    ch.map[li] = lay.local_of[src];
                    ch.factor[li] = std::sqrt(j.rate) * elem;
                }
                if (ch.src_block >= 0)
                    op.channels.push_back(std::move(ch));
            }
        }
    }

    // out = L(t) rho with the coupling Hamiltonian scaled by f.
    void apply(double f, const std::vector<cplx>& rho, std::vector<cplx>& out) const {
        const cplx mi_f(0.0, -f);
        for (int b = 0; b < lay_.blocks; ++b) {
            const auto& op = ops_[b];
            const int d = lay_.dim(b);
            const cplx* r = rho.data() + lay_.offset[b];
            cplx* o = out.data() + lay_.offset[b];
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    cplx v = (op.diag[i] + std::conj(op.diag[j])) * r[i * d + j];
                    cplx comm = 0.0;
                    for (int e = op.row_ptr[i]; e < op.row_ptr[i + 1]; ++e)
                        comm += op.val[e] * r[op.col[e] * d + j];
                    for (int e = op.row_ptr[j]; e < op.row_ptr[j + 1]; ++e)
                        comm -= r[i * d + op.col[e]] * std::conj(op.val[e]);
                    v += mi_f * comm;
                    for (const auto& ch : op.channels) {
                        const int mi = ch.map[i], mj = ch.map[j];
                        if (mi < 0 || mj < 0)
                            continue;
                        const int ds = lay_.dim(ch.src_block);
                        v += ch.factor[i] * ch.factor[j] * rho[lay_.offset[ch.src_block] + std::size_t(mi) * ds + mj];
                    }
                    o[i * d + j] = v;
                    if (j != i)
                        o[j * d + i] = std::conj(v);
                }
            }
        }
    }

private:
    const BlockLayout& lay_;
    std::vector<BlockOps> ops_;
};

std::vector<double> thermal_distribution(double nth, int cutoff) {
    std::vector<double> p(cutoff);
    const double ratio = nth / (1.0 + nth);
    double sum = 0.0;
    for (int k = 0; k < cutoff; ++k) {
        p[k] = std::pow(ratio, k);
        sum += p[k];
    }
    for (auto& x : p)
        x /= sum;
    return p;
}

} // namespace

FockMoments fock_moments(const DensityMatrix& rho, double phi) {
    const auto& m = rho.matrix();
    return moments_from(rho.dims(), phi, [&](int a, int b) { return m(a, b); });
}

double g2_cross_equal_time(const DensityMatrix& rho, double phi) {
    const FockMoments m = fock_moments(rho, phi);
    if (m.n_s < 1e-12 || m.n_ir < 1e-12)
        throw InvalidStateError("equal-time cross-correlation undefined: occupation below 1e-12");
    return m.pair_moment / (m.n_s * m.n_ir);
}

PulseTrajectory evolve(const ModeSet& modes, double n0, const FockConfig& fc, DriveEnvelope envelope) {
    validate(fc);
    if (!(n0 >= 0.0))
        throw DomainError("initial pump occupation must be nonnegative");

    const BlockLayout lay({fc.cutoff_s, fc.cutoff_vu, fc.cutoff_vl});

    // Frame: s shifted by +c and both phonon-polaritons by -c, which leaves the
    // pair-creation terms invariant and keeps the mode frequencies small.
    const double c = units::rate(0.5 * (modes.omega_vu + modes.omega_vl));
    const std::array<double, 3> freq = {units::rate(modes.omega_s - modes.omega_pump) + c,
                                        units::rate(modes.omega_vu) - c, units::rate(modes.omega_vl) - c};
    const cplx gu = units::rate(1.0) * modes.g_upper * std::sqrt(n0);
    const cplx gl = units::rate(1.0) * modes.g_lower * std::sqrt(n0);
    const double ks = units::rate(modes.gamma_s);
    const double ku = units::rate(modes.gamma_vu);
    const double kl = units::rate(modes.gamma_vl);
    const std::vector<JumpSpec> jumps = {
        {0, false, ks},
        {1, false, ku * (1.0 + modes.nth_vu)},
        {1, true, ku * modes.nth_vu},
        {2, false, kl * (1.0 + modes.nth_vl)},
        {2, true, kl * modes.nth_vl},
    };
    const MasterEquation eq(lay, freq, gu, gl, jumps);

    const double decay = units::rate(modes.gamma_pump);
    double t_end = fc.t_end;
    if (t_end == 0.0)
        t_end = envelope == DriveEnvelope::pulsed ? 20.0 / decay : 40.0 / std::min({ks, ku, kl});
    const double fastest = std::max({std::abs(freq[0]), std::abs(freq[1]), std::abs(freq[2]), std::abs(gu),
                                     std::abs(gl), ks, ku * (1.0 + modes.nth_vu), kl * (1.0 + modes.nth_vl)});
    double dt = 0.02 / fastest;
    if (fc.dt > 0.0)
        dt = std::min(dt, fc.dt);
    const long steps = std::max(1L, long(std::ceil(t_end / dt)));
    dt = t_end / double(steps);
    const long stride = std::max(1L, (steps + fc.max_samples - 2) / (fc.max_samples - 1));

    auto env = [&](double t) { return envelope == DriveEnvelope::pulsed ? std::exp(-0.5 * decay * t) : 1.0; };

    std::vector<cplx> rho(lay.total, 0.0);
    {
        const auto pu = thermal_distribution(modes.nth_vu, lay.n[1]);
        const auto pl = thermal_distribution(modes.nth_vl, lay.n[2]);
        for (int u = 0; u < lay.n[1]; ++u)
            for (int l = 0; l < lay.n[2]; ++l) {
                const int i = lay.flat(0, u, l);
                const int b = lay.block_of[i];
                const int li = lay.local_of[i];
                rho[lay.offset[b] + std::size_t(li) * lay.dim(b) + li] = pu[u] * pl[l];
            }
    }

    auto access = [&](const std::vector<cplx>& r) {
        return [&lay, &r](int a, int b) -> cplx {
            const int ba = lay.block_of[a];
            if (ba != lay.block_of[b])
                return 0.0;
            return r[lay.offset[ba] + std::size_t(lay.local_of[a]) * lay.dim(ba) + lay.local_of[b]];
        };
    };

    PulseTrajectory traj;
    traj.window = t_end;
    traj.dt = dt;
    traj.stored_elements = lay.total;

    const double vis_rate = ks;
    const double ir_rate = units::rate(modes.gamma_ir);
    double prev_vis = 0.0, prev_ir = 0.0;

    auto observe = [&](long step, double t) {
        const FockMoments m = moments_from(lay.n, modes.phi, access(rho));
        traj.max_trace_error = std::max(traj.max_trace_error, std::abs(m.trace - 1.0));
        std::array<double, 3> top{0.0, 0.0, 0.0};
        for (int a = 0; a < int(lay.block_of.size()); ++a) {
            const auto o = lay.occ(a);
            const double p = access(rho)(a, a).real();
            for (int k = 0; k < 3; ++k)
                if (o[k] == lay.n[k] - 1)
                    top[k] += p;
        }
        for (int k = 0; k < 3; ++k) {
            traj.max_top_population = std::max(traj.max_top_population, top[k]);
            if (top[k] > 1e-3) {
                static const char* names[3] = {"s", "vU", "vL"};
                throw TruncationError("Fock cutoff for mode " + std::string(names[k]) + " too small: top level population " +
                                      std::to_string(top[k]) + " at t = " + std::to_string(t) + " fs");
            }
        }
        const double vis = vis_rate * m.n_s;
        const double ir = ir_rate * m.n_ir;
        if (step > 0) {
            traj.photons_per_pulse_vis += 0.5 * dt * (vis + prev_vis);
            traj.photons_per_pulse_ir += 0.5 * dt * (ir + prev_ir);
        }
        prev_vis = vis;
        prev_ir = ir;
        if (step % stride == 0 || step == steps) {
            traj.t.push_back(t);
            traj.n_s.push_back(m.n_s);
            traj.n_vu.push_back(m.n_vu);
            traj.n_vl.push_back(m.n_vl);
            traj.n_ir.push_back(m.n_ir);
            traj.g2_cross_t.push_back(m.n_s >= 1e-12 && m.n_ir >= 1e-12 ? m.pair_moment / (m.n_s * m.n_ir)
                                                                        : std::numeric_limits<double>::quiet_NaN());
        }
    };

    std::vector<cplx> k1(lay.total), k2(lay.total), k3(lay.total), k4(lay.total), tmp(lay.total);
    observe(0, 0.0);
    for (long s = 0; s < steps; ++s) {
        const double t = dt * double(s);
        eq.apply(env(t), rho, k1);
        for (std::size_t i = 0; i < lay.total; ++i)
            tmp[i] = rho[i] + 0.5 * dt * k1[i];
        eq.apply(env(t + 0.5 * dt), tmp, k2);
        for (std::size_t i = 0; i < lay.total; ++i)
            tmp[i] = rho[i] + 0.5 * dt * k2[i];
        eq.apply(env(t + 0.5 * dt), tmp, k3);
        for (std::size_t i = 0; i < lay.total; ++i)
            tmp[i] = rho[i] + dt * k3[i];
        eq.apply(env(t + dt), tmp, k4);
        for (std::size_t i = 0; i < lay.total; ++i)
            rho[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        observe(s + 1, dt * double(s + 1));
    }

    if (fc.keep_final_state) {
        DensityMatrix d(lay.n[0], lay.n[1], lay.n[2]);
        auto& m = d.matrix();
        m.setZero();
        for (int b = 0; b < lay.blocks; ++b)
            for (int i = 0; i < lay.dim(b); ++i)
                for (int j = 0; j < lay.dim(b); ++j)
                    m(lay.states[b][i], lay.states[b][j]) = rho[lay.offset[b] + std::size_t(i) * lay.dim(b) + j];
        traj.final_state = std::move(d);
    }
    return traj;
}

PulseTrajectory evolve_pulse(double k_i, double k_f, double n0, const SystemParams& p, const FockConfig& fc) {
    return evolve(pair_modes(k_i, k_f, p), n0, fc, DriveEnvelope::pulsed);
}

} // namespace polom
