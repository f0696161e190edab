#include "polom/entanglement.hpp"

#include "polom/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace polom {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

Matrix4cd ladder_to_quadrature() {
    // (x, p) = U (a, a+),  U = [[1, 1], [-i, i]] / sqrt(2) per mode
    Matrix4cd u = Matrix4cd::Zero();
    const double h = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < 2; ++m) {
        u(2 * m, 2 * m) = h;
        u(2 * m, 2 * m + 1) = h;
        u(2 * m + 1, 2 * m) = -I * h;
        u(2 * m + 1, 2 * m + 1) = I * h;
    }
    return u;
}

Matrix4cd sub_moments(const Matrix6cd& c, int first, int second) {
    const int idx[4] = {first, first + 1, second, second + 1};
    Matrix4cd out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = c(idx[i], idx[j]);
    return out;
}

} // namespace

QuadratureCovariance quadrature_from_moments(const Matrix4cd& moments, ModePair pair) {
    static const Matrix4cd u = ladder_to_quadrature();
    const Matrix4cd x = u * moments * u.transpose();
    QuadratureCovariance q;
    q.pair = pair;
    q.r = (0.5 * (x + x.transpose())).real();
    return q;
}

QuadratureCovariance quadrature_reduce(const CovarianceSet& cov, ModePair pair) {
    switch (pair) {
    case ModePair::s_vu:
        return quadrature_from_moments(sub_moments(cov.second_moments, idx_s, idx_vu), pair);
    case ModePair::s_vl:
        return quadrature_from_moments(sub_moments(cov.second_moments, idx_s, idx_vl), pair);
    case ModePair::vis_ir:
        break;
    }
    throw DomainError("quadrature_reduce: use vis_ir_reduce for the visible/IR pair");
}

QuadratureCovariance vis_ir_reduce(const CovarianceSet& cov, double phi, double n_bg_vis, double n_bg_ir) {
    if (!(n_bg_vis >= 0.0) || !(n_bg_ir >= 0.0))
        throw DomainError("background occupations must be nonnegative");
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    Eigen::Matrix<std::complex<double>, 4, 6> t = Eigen::Matrix<std::complex<double>, 4, 6>::Zero();
    t(0, idx_s) = 1.0;
    t(1, idx_s_dag) = 1.0;
    t(2, idx_vu) = s;
    t(2, idx_vl) = c;
    t(3, idx_vu_dag) = s;
    t(3, idx_vl_dag) = c;
    Matrix4cd m = t * cov.second_moments * t.transpose();
    m(0, 1) += n_bg_vis;
    m(1, 0) += n_bg_vis;
    m(2, 3) += n_bg_ir;
    m(3, 2) += n_bg_ir;
    return quadrature_from_moments(m, ModePair::vis_ir);
}

double partial_transpose_min_eigenvalue(const QuadratureCovariance& q) {
    const double da = q.block11().determinant();
    const double db = q.block22().determinant();
    const double dc = q.block12().determinant();
    const double dr = q.r.determinant();
    const double sigma = da + db - 2.0 * dc;
    double disc = sigma * sigma - 4.0 * dr;
    const double scale = std::max(sigma * sigma, 1e-300);
    if (disc < 0.0) {
        if (disc < -1e-12 * scale)
            throw InvalidStateError("quadrature covariance has complex symplectic spectrum");
        disc = 0.0;
    }
    // roots of x^2 - sigma x + det R; the smaller gives the smaller symplectic eigenvalue
    const double big = 0.5 * (sigma + std::sqrt(disc));
    double small = big > 0.0 ? dr / big : 0.5 * (sigma - std::sqrt(disc));
    if (big < 0.0 && small < 0.0)
        throw InvalidStateError("quadrature covariance has no nonnegative symplectic eigenvalue");
    if (small < 0.0) {
        if (small < -1e-12)
            throw InvalidStateError("quadrature covariance is not a physical state");
        small = 0.0;
    }
    return std::sqrt(small);
}

double log_negativity(const QuadratureCovariance& q) {
    const double xi = partial_transpose_min_eigenvalue(q);
    if (xi == 0.0)
        return std::numeric_limits<double>::infinity();
    const double en = -std::log(2.0 * xi);
    return en > kSeparableTolerance ? en : 0.0;
}

bool is_physical(const QuadratureCovariance& q, double tol) {
    Eigen::Matrix4cd h = q.r.cast<std::complex<double>>();
    for (int m = 0; m < 2; ++m) {
        h(2 * m, 2 * m + 1) += 0.5 * I;
        h(2 * m + 1, 2 * m) -= 0.5 * I;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

SignalToNoise signal_to_noise(const CovarianceSet& cov, double phi, double n_bg_vis, double n_bg_ir) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const auto& m = cov.second_moments;
    const double n_ir = (c * c * m(idx_vl_dag, idx_vl) + s * s * m(idx_vu_dag, idx_vu) +
                         s * c * (m(idx_vu_dag, idx_vl) + m(idx_vl_dag, idx_vu)))
                            .real();
    SignalToNoise r;
    r.vis = n_bg_vis > 0.0 ? cov.n_s() / n_bg_vis : std::numeric_limits<double>::infinity();
    r.ir = n_bg_ir > 0.0 ? n_ir / n_bg_ir : std::numeric_limits<double>::infinity();
    return r;
}

} // namespace polom
