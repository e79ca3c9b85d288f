#include "qadia/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qadia/parallel.hpp"

namespace qadia {

namespace {

// Stable eigenvector of the 2x2 block [[a, s e^{+i phi}], [s e^{-i phi}, -a]]
// for eigenvalue ev, written on (up, down) components. Of the two equivalent
// closed forms the better conditioned one is used. A block that has shrunk
// to rounding noise carries no direction of its own; the basis vectors keep
// the two branches orthogonal there.
void block_eigenvector(double a, double s, double phi, double ev, bool plus_branch,
                       Complex& up, Complex& down) {
    const Complex eip(std::cos(phi), std::sin(phi));
    const double m_plus = s * s + (a + ev) * (a + ev);   // up-major form
    const double m_minus = s * s + (ev - a) * (ev - a);  // down-major form
    if (m_plus < 1e-24 && m_minus < 1e-24) {
        up = plus_branch ? 1.0 : 0.0;
        down = plus_branch ? 0.0 : 1.0;
        return;
    }
    if (m_plus >= m_minus) {
        const double inv = 1.0 / std::sqrt(m_plus);
        up = (a + ev) * inv;
        down = s * inv * std::conj(eip);
    } else {
        const double inv = 1.0 / std::sqrt(m_minus);
        up = s * inv * eip;
        down = (ev - a) * inv;
    }
}

void fill_degeneracy(const Eigen::Vector4d& values, double rel_deg_tol,
                     std::array<std::array<bool, 4>, 4>& deg) {
    const double range = values.maxCoeff() - values.minCoeff();
    const double tol = rel_deg_tol * std::max({range, values.cwiseAbs().maxCoeff(), 1.0});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) deg[i][j] = i != j && std::abs(values(i) - values(j)) < tol;
}

const std::array<std::array<int, 4>, 24>& all_permutations() {
    static const auto perms = [] {
        std::array<std::array<int, 4>, 24> out{};
        std::array<int, 4> p{0, 1, 2, 3};
        int n = 0;
        do {
            out[n++] = p;
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

// Assign solver columns to reference labels, maximizing the total squared
// overlap. Returns perm with perm[label] = solver column.
std::array<int, 4> assign_labels(const Mat4& solver_vecs, const Mat4& ref_vecs,
                                 double& min_overlap) {
    Eigen::Matrix4d ovl2;
    for (int s = 0; s < 4; ++s)
        for (int l = 0; l < 4; ++l) {
            const Complex z = solver_vecs.col(s).dot(ref_vecs.col(l));
            ovl2(s, l) = std::norm(z);
        }
    double best = -1.0;
    std::array<int, 4> best_perm{0, 1, 2, 3};
    for (const auto& p : all_permutations()) {
        double score = 0.0;
        for (int l = 0; l < 4; ++l) score += ovl2(p[l], l);
        if (score > best) {
            best = score;
            best_perm = p;
        }
    }
    min_overlap = 1.0;
    for (int l = 0; l < 4; ++l)
        min_overlap = std::min(min_overlap, std::sqrt(ovl2(best_perm[l], l)));
    return best_perm;
}

// Replace the columns of a degenerate group by the orthonormalized
// projections of the reference columns onto the degenerate subspace.
void align_group(Mat4& vecs, const Mat4& ref, const std::vector<int>& labels) {
    const int k = static_cast<int>(labels.size());
    MatX basis(4, k), target(4, k);
    for (int c = 0; c < k; ++c) {
        basis.col(c) = vecs.col(labels[c]);
        target.col(c) = ref.col(labels[c]);
    }
    MatX proj = basis * (basis.adjoint() * target);
    // Modified Gram-Schmidt; bail out if the projections collapse.
    for (int c = 0; c < k; ++c) {
        for (int b = 0; b < c; ++b) proj.col(c) -= proj.col(b).dot(proj.col(c)) * proj.col(b);
        const double n = proj.col(c).norm();
        if (n < 0.3) return;
        proj.col(c) /= n;
    }
    for (int c = 0; c < k; ++c) vecs.col(labels[c]) = proj.col(c);
}

void fix_phase_largest_component(Eigen::Ref<Vec4> v) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < 4; ++i) {
        const double m = std::abs(v(i));
        if (m > best) {
            best = m;
            arg = i;
        }
    }
    const Complex c = v(arg);
    if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

}  // namespace

bool GaugeFixedFrame::label_degenerate(int label) const {
    for (int j = 0; j < 4; ++j)
        if (deg[label - 1][j]) return true;
    return false;
}

EigenPairSet analytic_eigensystem(const ModelSpec& spec, double t) {
    spec.validate();
    if (spec.coupling == CouplingKind::FlipFlop)
        throw UnsupportedModel("analytic_eigensystem: no closed form for flip-flop coupling");
    const double g = spec.coupling == CouplingKind::None ? 0.0 : spec.g;
    const double ct = std::cos(spec.theta);
    const double st = std::sin(spec.theta);
    const double phi = spec.phase_at(t);

    const double r_plus = std::sqrt(g * g + 1.0 + 2.0 * g * ct);
    const double r_minus = std::sqrt(g * g + 1.0 - 2.0 * g * ct);

    EigenPairSet out;
    out.values.resize(4);
    out.values << r_plus, -r_plus, r_minus, -r_minus;
    out.vectors = MatX::Zero(4, 4);

    // Labels 1,2 live on {|up,up>, |down,up>} (block of qubit 2 up), labels
    // 3,4 on {|up,down>, |down,down>}.
    const double a12 = g + ct;
    const double a34 = ct - g;
    Complex up, down;
    block_eigenvector(a12, st, phi, r_plus, true, up, down);
    out.vectors(0, 0) = up;
    out.vectors(2, 0) = down;
    block_eigenvector(a12, st, phi, -r_plus, false, up, down);
    out.vectors(0, 1) = up;
    out.vectors(2, 1) = down;
    block_eigenvector(a34, st, phi, r_minus, true, up, down);
    out.vectors(1, 2) = up;
    out.vectors(3, 2) = down;
    block_eigenvector(a34, st, phi, -r_minus, false, up, down);
    out.vectors(1, 3) = up;
    out.vectors(3, 3) = down;

    const double range = out.values.maxCoeff() - out.values.minCoeff();
    const double tol = 1e-8 * std::max({range, out.values.cwiseAbs().maxCoeff(), 1.0});
    std::vector<bool> used(4, false);
    for (int i = 0; i < 4; ++i) {
        if (used[i]) continue;
        std::vector<int> grp{i};
        used[i] = true;
        for (int j = i + 1; j < 4; ++j)
            if (!used[j] && std::abs(out.values(i) - out.values(j)) < tol) {
                grp.push_back(j);
                used[j] = true;
            }
        out.degeneracy_groups.push_back(grp);
    }
    return out;
}

GaugeFixedFrame numeric_eigensystem(const ModelSpec& spec, double t,
                                    const GaugeFixedFrame* prev, double rel_deg_tol) {
    const Mat4 h = hamiltonian_at(spec, t);
    const EigenPairSet es = eig_hermitian(h, rel_deg_tol);
    const Mat4 solver_vecs = es.vectors;

    std::array<int, 4> perm{3, 0, 2, 1};  // (max, min, 2nd max, 2nd min) by value
    const bool has_analytic = spec.coupling != CouplingKind::FlipFlop;
    Mat4 ref;
    bool have_ref = false;
    if (has_analytic) {
        ref = analytic_eigensystem(spec, t).vectors;
        have_ref = true;
    } else if (prev) {
        ref = prev->vectors;
        have_ref = true;
    }

    if (have_ref) {
        double min_ovl = 0.0;
        perm = assign_labels(solver_vecs, ref, min_ovl);
        if (min_ovl < 0.6 && has_analytic && prev) {
            // Ambiguous against the closed form (degenerate cell); fall back
            // to continuity with the previous frame.
            ref = prev->vectors;
            perm = assign_labels(solver_vecs, ref, min_ovl);
        }
        if (min_ovl < 0.6 && !prev)
            throw DegenerateLabeling(
                "numeric_eigensystem: ambiguous labeling at a degeneracy and no previous frame");
    }

    GaugeFixedFrame frame;
    frame.t = t;
    for (int l = 0; l < 4; ++l) {
        frame.values(l) = es.values(perm[l]);
        frame.vectors.col(l) = solver_vecs.col(perm[l]);
    }
    fill_degeneracy(frame.values, rel_deg_tol, frame.deg);

    // Within a degenerate subspace the solver basis is arbitrary; pin it to
    // the reference so label tracking stays smooth.
    if (have_ref) {
        std::array<bool, 4> seen{};
        for (int l = 0; l < 4; ++l) {
            if (seen[l]) continue;
            std::vector<int> grp{l};
            seen[l] = true;
            for (int m = l + 1; m < 4; ++m)
                if (frame.deg[l][m] && !seen[m]) {
                    grp.push_back(m);
                    seen[m] = true;
                }
            if (grp.size() > 1) align_group(frame.vectors, ref, grp);
        }
    }

    for (int l = 0; l < 4; ++l) {
        if (prev) {
            const Complex z = prev->vectors.col(l).dot(frame.vectors.col(l));
            if (std::abs(z) > 1e-12) frame.vectors.col(l) *= std::conj(z) / std::abs(z);
        } else {
            fix_phase_largest_component(frame.vectors.col(l));
        }
    }
    return frame;
}

std::vector<GaugeFixedFrame> loop_frames(const LoopSpec& loop, int n_samples) {
    loop.validate();
    const int n = n_samples > 0 ? n_samples : loop.n_steps;
    if (n < 4) throw InvalidParameter("loop_frames: need at least 4 samples");
    const double dt = loop.period / n;

    std::vector<GaugeFixedFrame> frames;
    frames.reserve(n + 1);
    frames.push_back(numeric_eigensystem(loop.model, 0.0));
    for (int k = 1; k <= n; ++k)
        frames.push_back(numeric_eigensystem(loop.model, k * dt, &frames.back()));

    // Close the gauge: spread each label's holonomy uniformly along the
    // loop, then identify the final frame with the first.
    for (int l = 0; l < 4; ++l) {
        double arg_sum = 0.0;
        for (int k = 0; k + 1 < n; ++k)
            arg_sum += std::arg(frames[k].vectors.col(l).dot(frames[k + 1].vectors.col(l)));
        arg_sum += std::arg(frames[n - 1].vectors.col(l).dot(frames[0].vectors.col(l)));
        const double gamma = wrap_angle(-arg_sum);
        for (int k = 1; k <= n; ++k) {
            const double ph = -gamma * k / n;
            frames[k].vectors.col(l) *= Complex(std::cos(ph), std::sin(ph));
        }
    }
    frames[n].values = frames[0].values;
    frames[n].vectors = frames[0].vectors;
    frames[n].deg = frames[0].deg;
    return frames;
}

double gamma_from_frame(const GaugeFixedFrame& frame, const Mat4& dHdt, int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4 || i == j)
        throw InvalidParameter("gamma_from_frame: labels must be distinct and in 1..4");
    if (frame.degenerate(i, j))
        throw DegenerateGap("gamma_from_frame: levels are degenerate, metric is singular");
    const Complex me = frame.vectors.col(i - 1).dot(dHdt * frame.vectors.col(j - 1));
    const double gap = frame.values(i - 1) - frame.values(j - 1);
    return std::abs(me) / (gap * gap);
}

double gamma_metric(const ModelSpec& spec, double t, int i, int j, double rel_deg_tol) {
    const GaugeFixedFrame frame = numeric_eigensystem(spec, t, nullptr, rel_deg_tol);
    return gamma_from_frame(frame, hamiltonian_derivative_at(spec, t), i, j);
}

GammaSurface gamma_surface(CouplingKind coupling, double omega,
                           const std::vector<double>& thetas, const std::vector<double>& gs,
                           int jobs) {
    if (thetas.empty() || gs.empty())
        throw InvalidParameter("gamma_surface: grids must be nonempty");
    if (!std::is_sorted(thetas.begin(), thetas.end()) || !std::is_sorted(gs.begin(), gs.end()))
        throw InvalidParameter("gamma_surface: grids must be monotone increasing");

    GammaSurface surf;
    surf.thetas = thetas;
    surf.gs = gs;
    const std::size_t cells = thetas.size() * gs.size();
    surf.gamma12.assign(cells, 0.0);
    surf.gamma34.assign(cells, 0.0);
    surf.singular12.assign(cells, 0);
    surf.singular34.assign(cells, 0);

    const double inf = std::numeric_limits<double>::infinity();
    parallel_for(jobs, static_cast<int>(cells), [&](int cell) {
        const std::size_t it = static_cast<std::size_t>(cell) / gs.size();
        const std::size_t ig = static_cast<std::size_t>(cell) % gs.size();
        ModelSpec spec{coupling, gs[ig], thetas[it], omega, 0.0};
        const GaugeFixedFrame frame = numeric_eigensystem(spec, 0.0);
        const Mat4 dh = hamiltonian_derivative_at(spec, 0.0);
        if (frame.degenerate(1, 2)) {
            surf.gamma12[cell] = inf;
            surf.singular12[cell] = 1;
        } else {
            surf.gamma12[cell] = gamma_from_frame(frame, dh, 1, 2);
        }
        if (frame.degenerate(3, 4)) {
            surf.gamma34[cell] = inf;
            surf.singular34[cell] = 1;
        } else {
            surf.gamma34[cell] = gamma_from_frame(frame, dh, 3, 4);
        }
    });
    return surf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) throw InvalidParameter("linspace: count must be at least 2");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

}  // namespace qadia
