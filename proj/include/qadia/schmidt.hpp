#pragma once

#include <array>
#include <vector>

#include "qadia/dynamics.hpp"
#include "qadia/linalg.hpp"

namespace qadia {

/// Two-channel Schmidt form of a bipartite pure state:
/// |psi> = sum_i sqrt(p_i) e^{i chi} |E_i>|e_i>, p sorted descending.
/// When a weight vanishes the matching local vectors are completed by
/// orthogonality, so matrix elements between channels stay defined.
struct SchmidtForm {
    std::array<double, 2> p{};
    std::array<Vec2, 2> basis1;  // |E_i>, qubit 1
    std::array<Vec2, 2> basis2;  // |e_i>, qubit 2

    Vec4 reconstruct() const;  // sum_i sqrt(p_i) |E_i>|e_i>
};

SchmidtForm schmidt_decompose(const Vec4& psi);

/// Per-sample Schmidt data along a pure trajectory. Channel labels are
/// matched by overlap with the previous sample and both local bases carry
/// the same smoothing gauge as the spectra frames; z_j is the complex
/// amplitude <E_j e_j|psi> whose modulus is sqrt(p_j), and hmat holds the
/// composite Hamiltonian in the instantaneous product basis,
/// hmat(j,k) = <E_j e_j| H |E_k e_k>.
struct SchmidtSeries {
    LoopSpec loop;
    std::vector<double> times;
    std::vector<std::array<double, 2>> p;
    std::vector<std::array<Vec2, 2>> basis1;
    std::vector<std::array<Vec2, 2>> basis2;
    std::vector<std::array<Complex, 2>> z;
    std::vector<Mat2> hmat;
    std::vector<std::uint8_t> label_ambiguous;  // |p1 - p2| < 1e-6 at the sample

    double p_drift_max() const;  // max_t |p_j(t) - p_j(0)|
};

SchmidtSeries schmidt_series(const Trajectory& traj);

/// |H_12| / |H_11 - H_22| per sample; a vanishing diagonal split marks the
/// sample singular instead of producing a number.
struct RatioSeries {
    std::vector<double> values;
    std::vector<std::uint8_t> singular;

    double max_finite() const;
    bool any_singular() const;
};

RatioSeries nontransitional_ratios(const SchmidtSeries& series);

/// Largest-modulus residual of the exact rate identity obeyed by the
/// channel amplitudes sqrt(p_j):
///   i d/dt sqrt(p_j) + i sqrt(p_j)(<E_j|dE_j/dt> + <e_j|de_j/dt>)
///     - sum_{k!=j} sqrt(p_k) e^{-i int (H_kk - H_jj)} H_jk = 0.
/// Evaluated with centered differences (second-order one-sided stencils at
/// the ends); the residual is pure discretization error and shrinks as the
/// sampling is refined.
double rate_equation_residual(const SchmidtSeries& series);

/// Per-operator, per-sample ratios |<E_1 e_1| G |E_2 e_2>| / |H_11 - H_22|
/// for external coupling agents G acting on the composite space.
std::vector<RatioSeries> open_system_ratio(const SchmidtSeries& series,
                                           const std::vector<Mat4>& gamma_ops);

/// Spectral series of the reduced state of qubit 1, labels matched by
/// continuity; valid for pure and mixed trajectories.
struct ReducedDensitySeries {
    std::vector<double> times;
    std::vector<std::array<double, 2>> eigenvalues;  // descending at t = 0
    std::vector<std::array<Vec2, 2>> eigenvectors;

    double drift_max() const;
};

ReducedDensitySeries reduced_density_eigen(const Trajectory& traj);

/// Non-transitional ratios for arbitrary (pure or mixed) trajectories, built
/// from the eigenbases of both reduced states paired by descending initial
/// eigenvalue. For pure trajectories this coincides with the Schmidt route.
RatioSeries subsystem_ratio_series(const Trajectory& traj);

}  // namespace qadia
