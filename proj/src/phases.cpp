#include "qadia/phases.hpp"

#include <cmath>
#include <limits>

namespace qadia {

namespace {

void require_closed(const std::vector<GaugeFixedFrame>& frames) {
    if (frames.size() < 4) throw FrameMismatch("need a closed loop of frames");
    for (int l = 0; l < 4; ++l)
        if (overlap_mag(frames[frames.size() - 1].vectors.col(l), frames[0].vectors.col(l)) <
            0.99)
            throw FrameMismatch("frames do not return to frame 0 at the end of the loop");
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

LoopPhases geometric_phase(const Trajectory& traj) {
    if (traj.mixed()) throw InvalidParameter("geometric_phase: pure trajectory required");
    if (traj.n_samples() < 2) throw InsufficientSamples("geometric_phase: empty trajectory");

    const Vec4 psi0 = traj.states.front() / traj.states.front().norm();
    const Vec4 psiT = traj.states.back() / traj.states.back().norm();
    const Complex closure = psi0.dot(psiT);

    LoopPhases out;
    out.total = std::arg(closure);
    out.cyclic_overlap = std::abs(closure);
    out.well_conditioned = out.cyclic_overlap >= 0.1;

    // Accumulated dynamical phase -int <psi|H|psi> dt; the expectation is
    // taken on the normalized state so integrator norm drift cannot bias it.
    double acc = 0.0;
    double prev_e = 0.0;
    for (std::size_t k = 0; k < traj.n_samples(); ++k) {
        const Vec4 psi = traj.states[k] / traj.states[k].norm();
        const Mat4 h = hamiltonian_at(traj.loop.model, traj.times[k]);
        const double e = psi.dot(h * psi).real();
        if (k > 0) acc += 0.5 * (traj.times[k] - traj.times[k - 1]) * (e + prev_e);
        prev_e = e;
    }
    out.dynamical = -acc;
    out.geometric = wrap_angle(out.total - out.dynamical);
    return out;
}

double berry_phase(const std::vector<GaugeFixedFrame>& frames, int label) {
    if (label < 1 || label > 4) throw InvalidParameter("berry_phase: label must be in 1..4");
    require_closed(frames);

    // Discrete holonomy over nodes 0..N-1 with the closing link back onto
    // frame 0; the redundant final frame is never read, so independent
    // per-frame phase redefinitions cancel. A collapsing link overlap means
    // the label's vector family is discontinuous (a degeneracy broke the
    // tracking) and the holonomy is ill-defined.
    const std::size_t n = frames.size() - 1;
    const int l = label - 1;
    double arg_sum = 0.0;
    auto link = [&](std::size_t a, std::size_t b) {
        const Complex z = frames[a].vectors.col(l).dot(frames[b].vectors.col(l));
        if (std::abs(z) < 0.5)
            throw DegenerateGap("berry_phase: eigenvector family breaks at a degeneracy");
        return std::arg(z);
    };
    for (std::size_t k = 0; k + 1 < n; ++k) arg_sum += link(k, k + 1);
    arg_sum += link(n - 1, 0);
    return wrap_angle(-arg_sum);
}

Eigen::Matrix4d omega_matrix(const std::vector<GaugeFixedFrame>& frames) {
    Eigen::Vector4d phi = Eigen::Vector4d::Zero();
    for (std::size_t k = 1; k < frames.size(); ++k) {
        const double dt = frames[k].t - frames[k - 1].t;
        phi += 0.5 * dt * (frames[k].values + frames[k - 1].values);
    }
    Eigen::Matrix4d omega;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) omega(j, k) = phi(k) - phi(j);
    return omega;
}

std::array<Complex, 4> perturbative_amplitudes(const LoopSpec& loop,
                                               const std::vector<GaugeFixedFrame>& frames,
                                               int seed_label) {
    if (seed_label < 1 || seed_label > 4)
        throw InvalidParameter("perturbative_amplitudes: seed label must be in 1..4");
    require_closed(frames);

    const double gamma_n = berry_phase(frames, seed_label);
    const Eigen::Matrix4d omega = omega_matrix(frames);
    const GaugeFixedFrame& end = frames.back();
    const Mat4 dh = hamiltonian_derivative_at(loop.model, end.t);
    const double me_floor = 1e-10 * std::max(1.0, dh.cwiseAbs().maxCoeff());

    std::array<Complex, 4> c{};
    const int n = seed_label - 1;
    c[n] = unit_phase(gamma_n);
    for (int m = 0; m < 4; ++m) {
        if (m == n) continue;
        const Complex coupling = end.vectors.col(m).dot(dh * end.vectors.col(n));
        if (end.deg[m][n]) {
            // A degenerate pair is harmless while the drive never connects
            // the two levels (a symmetry-decoupled channel); otherwise the
            // first-order denominator is genuinely singular.
            if (std::abs(coupling) < me_floor) {
                c[m] = Complex(0.0, 0.0);
                continue;
            }
            throw DegenerateGap("perturbative_amplitudes: degenerate gap on the loop");
        }
        const double gap = end.values(m) - end.values(n);
        // <phi_m | dphi_n/dt> through the dH/dt identity.
        const Complex me = coupling / (-gap);
        c[m] = unit_phase(omega(n, m) + gamma_n) * me / gap;
    }
    return c;
}

PerturbativePhases geometric_phase_perturbative(const LoopSpec& loop,
                                                const std::vector<GaugeFixedFrame>& frames,
                                                int seed_label) {
    PerturbativePhases out;
    out.gamma_n = berry_phase(frames, seed_label);
    const auto c = perturbative_amplitudes(loop, frames, seed_label);

    const int n = seed_label - 1;
    Complex w(0.0, 0.0);
    for (int m = 0; m < 4; ++m)
        if (m != n) w += c[m] * unit_phase(-out.gamma_n);
    out.phi_18 = wrap_angle(out.gamma_n + std::arg(Complex(1.0, 0.0) + w));
    out.phi_19 = wrap_angle(out.gamma_n + w.imag());

    const GaugeFixedFrame& end = frames.back();
    const Mat4 dh = hamiltonian_derivative_at(loop.model, end.t);
    for (int m = 1; m <= 4; ++m)
        if (m != seed_label && !end.degenerate(m, seed_label))
            out.gamma_metric_max =
                std::max(out.gamma_metric_max, gamma_from_frame(end, dh, m, seed_label));
    return out;
}

PhaseReport make_phase_report(const Trajectory& traj,
                              const std::vector<GaugeFixedFrame>& frames, int seed_label) {
    PhaseReport rep;
    rep.loop = geometric_phase(traj);
    rep.omega = omega_matrix(frames);
    for (int l = 1; l <= 4; ++l) {
        try {
            rep.berry[l - 1] = berry_phase(frames, l);
        } catch (const Error&) {
            rep.berry[l - 1] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (seed_label >= 1 && seed_label <= 4) {
        try {
            rep.perturbative = geometric_phase_perturbative(traj.loop, frames, seed_label);
            rep.has_perturbative = true;
        } catch (const Error&) {
            rep.has_perturbative = false;
        }
    }
    return rep;
}

}  // namespace qadia
