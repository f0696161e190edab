#include "polom/matrix_exp.hpp"

#include "polom/errors.hpp"

#include <Eigen/LU>
#include <array>
#include <cmath>

namespace polom {

namespace {

using Mat = Eigen::MatrixXcd;

constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Mat solve_pade(const Mat& u, const Mat& v) {
    // r = (v - u)^{-1} (v + u)
    Eigen::PartialPivLU<Mat> lu(v - u);
    return lu.solve(v + u);
}

Mat pade_low(const Mat& a, int m) {
    static const double b3[] = {120.0, 60.0, 12.0, 1.0};
    static const double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static const double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
    static const double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                2162160.0,     110880.0,     3960.0,       90.0,        1.0};
    const double* b = m == 3 ? b3 : m == 5 ? b5 : m == 7 ? b7 : b9;
    const Eigen::Index n = a.rows();
    const Mat id = Mat::Identity(n, n);
    const Mat a2 = a * a;
    Mat pw = id;
    Mat uo = Mat::Zero(n, n);
    Mat ve = Mat::Zero(n, n);
    for (int j = 0; j <= m; j += 2) {
        ve += b[j] * pw;
        uo += b[j + 1] * pw;
        pw = pw * a2;
    }
    return solve_pade(a * uo, ve);
}

Mat pade13(const Mat& a) {
    const auto& b = kB13;
    const Eigen::Index n = a.rows();
    const Mat id = Mat::Identity(n, n);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return solve_pade(u, v);
}

} // namespace

Mat matrix_exp(const Mat& a) {
    if (a.rows() != a.cols())
        throw DomainError("matrix_exp requires a square matrix");
    if (!a.allFinite())
        throw DomainError("matrix_exp argument has non-finite entries");
    if (a.rows() == 0)
        return a;

    const double nrm = norm1(a);
    static const std::array<std::pair<int, double>, 4> low = {
        {{3, 1.495585217958292e-2}, {5, 2.539398330063230e-1}, {7, 9.504178996162932e-1}, {9, 2.097847961257068e0}}};
    for (auto [m, theta] : low)
        if (nrm <= theta)
            return pade_low(a, m);

    constexpr double theta13 = 5.371920351148152;
    int s = 0;
    if (nrm > theta13)
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    Mat r = pade13(a / std::ldexp(1.0, s));
    for (int i = 0; i < s; ++i)
        r = r * r;
    return r;
}

} // namespace polom
