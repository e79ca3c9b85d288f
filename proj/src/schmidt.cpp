#include "qadia/schmidt.hpp"

#include <cmath>
#include <limits>

namespace qadia {

namespace {

constexpr double kAmbiguityTol = 1e-6;

Mat2 coefficient_matrix(const Vec4& psi) {
    Mat2 c;
    c << psi(0), psi(1), psi(2), psi(3);  // rows: qubit 1, cols: qubit 2
    return c;
}

void fix_phase_largest(Vec2& v) {
    const int arg = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    const Complex c = v(arg);
    if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

// Rotate v so that <ref|v> is real positive; returns the applied phase.
void smooth_against(const Vec2& ref, Vec2& v) {
    const Complex z = ref.dot(v);
    if (std::abs(z) > 1e-12) v *= std::conj(z) / std::abs(z);
}

double denominator_tolerance(const Mat2& hmat) {
    return 1e-12 * std::max(1.0, hmat.cwiseAbs().maxCoeff());
}

struct EigenPair2 {
    std::array<double, 2> values;  // descending
    std::array<Vec2, 2> vectors;
};

EigenPair2 eigen_desc(const Mat2& rho) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
    EigenPair2 out;
    out.values = {es.eigenvalues()(1), es.eigenvalues()(0)};
    out.vectors = {es.eigenvectors().col(1), es.eigenvectors().col(0)};
    return out;
}

// Continuity matching of a two-channel basis pair against the previous
// sample; swaps labels when the crossed assignment overlaps better.
void match_and_smooth(const std::array<Vec2, 2>& prev, std::array<double, 2>& values,
                      std::array<Vec2, 2>& vectors) {
    const double keep = std::norm(prev[0].dot(vectors[0])) + std::norm(prev[1].dot(vectors[1]));
    const double swap = std::norm(prev[0].dot(vectors[1])) + std::norm(prev[1].dot(vectors[0]));
    if (swap > keep) {
        std::swap(values[0], values[1]);
        std::swap(vectors[0], vectors[1]);
    }
    smooth_against(prev[0], vectors[0]);
    smooth_against(prev[1], vectors[1]);
}

Mat4 density_at(const Trajectory& traj, std::size_t k) {
    if (traj.mixed()) {
        const Mat4& rho = traj.rho_states[k];
        return rho / rho.trace().real();
    }
    Vec4 psi = traj.states[k];
    psi /= psi.norm();
    return psi * psi.adjoint();
}

}  // namespace

Vec4 SchmidtForm::reconstruct() const {
    return std::sqrt(p[0]) * tensor_ket(basis1[0], basis2[0]) +
           std::sqrt(p[1]) * tensor_ket(basis1[1], basis2[1]);
}

SchmidtForm schmidt_decompose(const Vec4& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-6)
        throw NonPhysical("schmidt_decompose: state is not normalized");
    const Vec4 psi_hat = psi / psi.norm();

    Eigen::JacobiSVD<Mat2> svd(coefficient_matrix(psi_hat),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtForm out;
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    const double total = s0 * s0 + s1 * s1;
    out.p = {s0 * s0 / total, s1 * s1 / total};
    for (int i = 0; i < 2; ++i) {
        Vec2 u = svd.matrixU().col(i);
        Vec2 v = svd.matrixV().col(i).conjugate();
        // Phase convention: qubit-1 vector has its largest component real
        // positive; the partner vector absorbs the opposite phase so the
        // expansion keeps real nonnegative coefficients.
        const int arg = std::abs(u(0)) >= std::abs(u(1)) ? 0 : 1;
        const Complex c = u(arg);
        if (std::abs(c) > 0.0) {
            const Complex ph = std::conj(c) / std::abs(c);
            u *= ph;
            v *= std::conj(ph);
        }
        out.basis1[i] = u;
        out.basis2[i] = v;
    }
    return out;
}

double SchmidtSeries::p_drift_max() const {
    double drift = 0.0;
    for (const auto& pk : p)
        for (int j = 0; j < 2; ++j) drift = std::max(drift, std::abs(pk[j] - p.front()[j]));
    return drift;
}

SchmidtSeries schmidt_series(const Trajectory& traj) {
    if (traj.mixed()) throw InvalidParameter("schmidt_series: pure trajectory required");
    const std::size_t n = traj.n_samples();
    if (n < 2) throw InsufficientSamples("schmidt_series: need at least two samples");

    SchmidtSeries out;
    out.loop = traj.loop;
    out.times = traj.times;
    out.p.resize(n);
    out.basis1.resize(n);
    out.basis2.resize(n);
    out.z.resize(n);
    out.hmat.resize(n);
    out.label_ambiguous.assign(n, 0);

    for (std::size_t k = 0; k < n; ++k) {
        Vec4 psi_hat = traj.states[k];
        psi_hat /= psi_hat.norm();

        Eigen::JacobiSVD<Mat2> svd(coefficient_matrix(psi_hat),
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double s0 = svd.singularValues()(0);
        const double s1 = svd.singularValues()(1);
        const double total = s0 * s0 + s1 * s1;
        std::array<double, 2> p{s0 * s0 / total, s1 * s1 / total};
        std::array<Vec2, 2> e1{svd.matrixU().col(0), svd.matrixU().col(1)};
        std::array<Vec2, 2> e2{Vec2(svd.matrixV().col(0).conjugate()),
                               Vec2(svd.matrixV().col(1).conjugate())};

        if (k == 0) {
            for (int i = 0; i < 2; ++i) {
                fix_phase_largest(e1[i]);
                fix_phase_largest(e2[i]);
            }
        } else {
            // Label continuity on the qubit-1 basis decides the channel
            // order; both local bases then get phase-smoothed.
            const double keep = std::norm(out.basis1[k - 1][0].dot(e1[0])) +
                                std::norm(out.basis1[k - 1][1].dot(e1[1]));
            const double swap = std::norm(out.basis1[k - 1][0].dot(e1[1])) +
                                std::norm(out.basis1[k - 1][1].dot(e1[0]));
            if (swap > keep) {
                std::swap(p[0], p[1]);
                std::swap(e1[0], e1[1]);
                std::swap(e2[0], e2[1]);
            }
            for (int i = 0; i < 2; ++i) {
                smooth_against(out.basis1[k - 1][i], e1[i]);
                smooth_against(out.basis2[k - 1][i], e2[i]);
            }
        }
        if (std::abs(p[0] - p[1]) < kAmbiguityTol) out.label_ambiguous[k] = 1;

        out.p[k] = p;
        out.basis1[k] = e1;
        out.basis2[k] = e2;

        const Mat4 h = hamiltonian_at(traj.loop.model, traj.times[k]);
        std::array<Vec4, 2> kets{tensor_ket(e1[0], e2[0]), tensor_ket(e1[1], e2[1])};
        for (int j = 0; j < 2; ++j) {
            out.z[k][j] = kets[j].dot(psi_hat);
            for (int l = 0; l < 2; ++l) out.hmat[k](j, l) = kets[j].dot(h * kets[l]);
        }
    }
    return out;
}

double RatioSeries::max_finite() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!singular[k]) m = std::max(m, values[k]);
    return m;
}

bool RatioSeries::any_singular() const {
    for (auto s : singular)
        if (s) return true;
    return false;
}

RatioSeries nontransitional_ratios(const SchmidtSeries& series) {
    RatioSeries out;
    const std::size_t n = series.times.size();
    out.values.assign(n, 0.0);
    out.singular.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const Mat2& hm = series.hmat[k];
        const double denom = std::abs(hm(0, 0).real() - hm(1, 1).real());
        if (denom < denominator_tolerance(hm)) {
            out.values[k] = std::numeric_limits<double>::infinity();
            out.singular[k] = 1;
        } else {
            out.values[k] = std::abs(hm(0, 1)) / denom;
        }
    }
    return out;
}

double rate_equation_residual(const SchmidtSeries& series) {
    const std::size_t n = series.times.size();
    if (n < 65)
        throw InsufficientSamples("rate_equation_residual: need at least 64 steps");
    const double dt = series.times[1] - series.times[0];

    // Dynamical phases of the two channels.
    std::array<std::vector<double>, 2> phi;
    for (int j = 0; j < 2; ++j) {
        phi[j].assign(n, 0.0);
        for (std::size_t k = 1; k < n; ++k)
            phi[j][k] = phi[j][k - 1] +
                        0.5 * dt *
                            (series.hmat[k](j, j).real() + series.hmat[k - 1](j, j).real());
    }

    // Channel amplitudes with their dynamical phase factored out.
    std::array<std::vector<Complex>, 2> s;
    for (int j = 0; j < 2; ++j) {
        s[j].resize(n);
        for (std::size_t k = 0; k < n; ++k)
            s[j][k] = series.z[k][j] * Complex(std::cos(phi[j][k]), std::sin(phi[j][k]));
    }

    // Centered differences; second-order one-sided stencils at the ends.
    auto stencil = [n](std::size_t k, std::array<std::size_t, 3>& idx,
                       std::array<double, 3>& w) {
        if (k == 0) {
            idx = {0, 1, 2};
            w = {-3.0, 4.0, -1.0};
        } else if (k == n - 1) {
            idx = {n - 1, n - 2, n - 3};
            w = {3.0, -4.0, 1.0};
        } else {
            idx = {k + 1, k - 1, k};
            w = {1.0, -1.0, 0.0};
        }
    };

    const Complex I(0.0, 1.0);
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::array<std::size_t, 3> idx;
        std::array<double, 3> w;
        stencil(k, idx, w);
        for (int j = 0; j < 2; ++j) {
            Complex ds(0.0, 0.0);
            Vec2 de1_vec = Vec2::Zero(), de2_vec = Vec2::Zero();
            for (int m = 0; m < 3; ++m) {
                ds += w[m] * s[j][idx[m]];
                de1_vec += w[m] * series.basis1[idx[m]][j];
                de2_vec += w[m] * series.basis2[idx[m]][j];
            }
            ds /= 2.0 * dt;
            de1_vec /= 2.0 * dt;
            de2_vec /= 2.0 * dt;
            const Complex de1 = series.basis1[k][j].dot(de1_vec);
            const Complex de2 = series.basis2[k][j].dot(de2_vec);
            Complex lhs = I * ds + I * s[j][k] * (de1 + de2);
            const int o = 1 - j;
            const double dphi = phi[o][k] - phi[j][k];
            lhs -= s[o][k] * Complex(std::cos(-dphi), std::sin(-dphi)) * series.hmat[k](j, o);
            residual = std::max(residual, std::abs(lhs));
        }
    }
    return residual;
}

std::vector<RatioSeries> open_system_ratio(const SchmidtSeries& series,
                                           const std::vector<Mat4>& gamma_ops) {
    const std::size_t n = series.times.size();
    std::vector<RatioSeries> out(gamma_ops.size());
    for (auto& r : out) {
        r.values.assign(n, 0.0);
        r.singular.assign(n, 0);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Vec4 ket0 = tensor_ket(series.basis1[k][0], series.basis2[k][0]);
        const Vec4 ket1 = tensor_ket(series.basis1[k][1], series.basis2[k][1]);
        const Mat2& hm = series.hmat[k];
        const double denom = std::abs(hm(0, 0).real() - hm(1, 1).real());
        const bool singular = denom < denominator_tolerance(hm);
        for (std::size_t a = 0; a < gamma_ops.size(); ++a) {
            if (singular) {
                out[a].values[k] = std::numeric_limits<double>::infinity();
                out[a].singular[k] = 1;
            } else {
                out[a].values[k] = std::abs(ket0.dot(gamma_ops[a] * ket1)) / denom;
            }
        }
    }
    return out;
}

double ReducedDensitySeries::drift_max() const {
    double drift = 0.0;
    for (const auto& ek : eigenvalues)
        for (int j = 0; j < 2; ++j)
            drift = std::max(drift, std::abs(ek[j] - eigenvalues.front()[j]));
    return drift;
}

ReducedDensitySeries reduced_density_eigen(const Trajectory& traj) {
    const std::size_t n = traj.n_samples();
    ReducedDensitySeries out;
    out.times = traj.times;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Mat2 rho1 = partial_trace_2(density_at(traj, k));
        EigenPair2 ep = eigen_desc(rho1);
        if (k == 0) {
            fix_phase_largest(ep.vectors[0]);
            fix_phase_largest(ep.vectors[1]);
        } else {
            match_and_smooth(out.eigenvectors[k - 1], ep.values, ep.vectors);
        }
        out.eigenvalues[k] = ep.values;
        out.eigenvectors[k] = ep.vectors;
    }
    return out;
}

RatioSeries subsystem_ratio_series(const Trajectory& traj) {
    const std::size_t n = traj.n_samples();
    RatioSeries out;
    out.values.assign(n, 0.0);
    out.singular.assign(n, 0);

    std::array<Vec2, 2> prev1, prev2;
    for (std::size_t k = 0; k < n; ++k) {
        const Mat4 rho = density_at(traj, k);
        EigenPair2 s1 = eigen_desc(partial_trace_2(rho));
        EigenPair2 s2 = eigen_desc(partial_trace_1(rho));
        if (k == 0) {
            for (int i = 0; i < 2; ++i) {
                fix_phase_largest(s1.vectors[i]);
                fix_phase_largest(s2.vectors[i]);
            }
        } else {
            match_and_smooth(prev1, s1.values, s1.vectors);
            match_and_smooth(prev2, s2.values, s2.vectors);
        }
        prev1 = s1.vectors;
        prev2 = s2.vectors;

        const Mat4 h = hamiltonian_at(traj.loop.model, traj.times[k]);
        const Vec4 ket0 = tensor_ket(s1.vectors[0], s2.vectors[0]);
        const Vec4 ket1 = tensor_ket(s1.vectors[1], s2.vectors[1]);
        const double h00 = ket0.dot(h * ket0).real();
        const double h11 = ket1.dot(h * ket1).real();
        const double denom = std::abs(h00 - h11);
        if (denom < 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
            out.values[k] = std::numeric_limits<double>::infinity();
            out.singular[k] = 1;
        } else {
            out.values[k] = std::abs(ket0.dot(h * ket1)) / denom;
        }
    }
    return out;
}

}  // namespace qadia
