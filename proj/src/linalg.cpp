#include "qadia/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qadia/types.hpp"

namespace qadia {

double wrap_angle(double phi) {
    double w = std::remainder(phi, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

double angle_diff(double a, double b) { return wrap_angle(a - b); }

Mat2 sigma_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 sigma_y() {
    Mat2 m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Mat2 sigma_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

Mat2 identity2() { return Mat2::Identity(); }

Vec4 basis_ket(int q1, int q2) {
    if (q1 < 0 || q1 > 1 || q2 < 0 || q2 > 1)
        throw DimensionMismatch("basis_ket: qubit indices must be 0 (up) or 1 (down)");
    Vec4 v = Vec4::Zero();
    v(2 * q1 + q2) = 1.0;
    return v;
}

bool EigenPairSet::is_degenerate(int i) const {
    for (const auto& grp : degeneracy_groups)
        if (grp.size() > 1 && std::find(grp.begin(), grp.end(), i) != grp.end()) return true;
    return false;
}

bool EigenPairSet::same_group(int i, int j) const {
    for (const auto& grp : degeneracy_groups) {
        const bool has_i = std::find(grp.begin(), grp.end(), i) != grp.end();
        const bool has_j = std::find(grp.begin(), grp.end(), j) != grp.end();
        if (has_i && has_j) return true;
    }
    return false;
}

double hermiticity_defect(const MatX& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("hermiticity_defect: matrix not square");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

EigenPairSet eig_hermitian(const MatX& a, double rel_deg_tol) {
    if (a.rows() != a.cols()) throw DimensionMismatch("eig_hermitian: matrix not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (hermiticity_defect(a) > 1e-12 * scale)
        throw NonHermitian("eig_hermitian: matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<MatX> solver(a);
    if (solver.info() != Eigen::Success)
        throw Error("eig_hermitian: eigensolver failed to converge");

    EigenPairSet out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();

    const int n = static_cast<int>(out.values.size());
    const double range = out.values(n - 1) - out.values(0);
    const double vmax = out.values.cwiseAbs().maxCoeff();
    const double tol = rel_deg_tol * std::max({range, vmax, 1.0});
    std::vector<int> grp{0};
    for (int i = 1; i <= n; ++i) {
        if (i < n && out.values(i) - out.values(i - 1) < tol) {
            grp.push_back(i);
        } else {
            out.degeneracy_groups.push_back(grp);
            if (i < n) grp = {i};
        }
    }
    return out;
}

Vec4 tensor_ket(const Vec2& a, const Vec2& b) {
    Vec4 v;
    v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return v;
}

Mat2 partial_trace_2(const MatX& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw DimensionMismatch("partial_trace_2: expected a 4x4 density matrix");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if (hermiticity_defect(rho) > 1e-9 * scale)
        throw NonHermitian("partial_trace_2: density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > 1e-6)
        throw NonPhysical("partial_trace_2: trace deviates from one");

    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return out;
}

Mat2 partial_trace_1(const MatX& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw DimensionMismatch("partial_trace_1: expected a 4x4 density matrix");
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rho(i, j) + rho(2 + i, 2 + j);
    return out;
}

double overlap_mag(const VecX& a, const VecX& b) {
    if (a.size() != b.size()) throw DimensionMismatch("overlap_mag: size mismatch");
    return std::abs(a.dot(b));
}

}  // namespace qadia
