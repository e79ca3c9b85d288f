#pragma once

#include <vector>

#include "qadia/errors.hpp"
#include "qadia/types.hpp"

namespace qadia {

// Pauli matrices with sigma_z |up> = +|up>, and the 2x2 identity.
Mat2 sigma_x();
Mat2 sigma_y();
Mat2 sigma_z();
Mat2 identity2();

/// Basis ket of the two-qubit space; qubit 1 is the left (slow) tensor
/// factor, so the composite index is 2*q1 + q2 with 0 = up, 1 = down.
Vec4 basis_ket(int q1, int q2);

struct EigenPairSet {
    Eigen::VectorXd values;  // ascending from eig_hermitian, label order in spectra
    MatX vectors;            // one eigenvector per column, orthonormal
    std::vector<std::vector<int>> degeneracy_groups;

    bool is_degenerate(int i) const;
    bool same_group(int i, int j) const;
};

/// Largest entry of |A - A^dagger|.
double hermiticity_defect(const MatX& a);

/// Eigendecomposition of a Hermitian matrix. Values ascending, vectors
/// orthonormal; eigenvalues closer than rel_deg_tol * spectral scale are
/// grouped as degenerate.
EigenPairSet eig_hermitian(const MatX& a, double rel_deg_tol = 1e-8);

/// Kronecker product with the first argument as the slow (left) factor.
/// Works for matrices and column vectors alike.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> tensor(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols();
    const Eigen::Index br = b.rows(), bc = b.cols();
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j)
            out.block(i * br, j * bc, br, bc) = Complex(a(i, j)) * b.template cast<Complex>();
    return out;
}

/// Product ket |a>|b> of two single-qubit states.
Vec4 tensor_ket(const Vec2& a, const Vec2& b);

/// Trace out qubit 2 of a two-qubit density matrix.
Mat2 partial_trace_2(const MatX& rho);

/// Trace out qubit 1 of a two-qubit density matrix.
Mat2 partial_trace_1(const MatX& rho);

/// |<a|b>| for equally sized state vectors.
double overlap_mag(const VecX& a, const VecX& b);

}  // namespace qadia
