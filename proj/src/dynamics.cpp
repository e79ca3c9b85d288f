#include "qadia/dynamics.hpp"

#include <cmath>

namespace qadia {

namespace {

constexpr double kStepDriftLimit = 1e-6;

int suggest_steps(int n_steps) { return n_steps * 4; }

void check_times(const std::vector<double>& times, const std::vector<GaugeFixedFrame>& frames) {
    if (times.size() != frames.size())
        throw FrameMismatch("frames are not sampled at the trajectory times");
    const double tol = 1e-9 * std::max(1.0, std::abs(times.back()));
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - frames[k].t) > tol)
            throw FrameMismatch("frames are not sampled at the trajectory times");
}

// Cumulative trapezoid of the label energies over the frames.
std::array<std::vector<double>, 4> accumulate_phases(const std::vector<GaugeFixedFrame>& frames) {
    std::array<std::vector<double>, 4> phi;
    const std::size_t n = frames.size();
    for (int l = 0; l < 4; ++l) {
        phi[l].assign(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            const double dt = frames[k].t - frames[k - 1].t;
            phi[l][k] = phi[l][k - 1] + 0.5 * dt * (frames[k].values(l) + frames[k - 1].values(l));
        }
    }
    return phi;
}

}  // namespace

Trajectory evolve_pure(const LoopSpec& loop, const Vec4& psi0) {
    loop.validate();
    if (std::abs(psi0.norm() - 1.0) > 1e-8)
        throw NonPhysical("evolve_pure: initial state is not normalized");

    const int n = loop.n_steps;
    const double dt = loop.dt();
    const Complex mi(0.0, -1.0);

    Trajectory traj;
    traj.loop = loop;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);

    Mat4 h0 = hamiltonian_at(loop.model, 0.0);
    Vec4 psi = psi0;
    for (int k = 0; k < n; ++k) {
        const double t = k * dt;
        const Mat4 hm = hamiltonian_at(loop.model, t + 0.5 * dt);
        const Mat4 h1 = hamiltonian_at(loop.model, t + dt);

        const Vec4 k1 = mi * (h0 * psi);
        const Vec4 k2 = mi * (hm * (psi + 0.5 * dt * k1));
        const Vec4 k3 = mi * (hm * (psi + 0.5 * dt * k2));
        const Vec4 k4 = mi * (h1 * (psi + dt * k3));

        const double norm_before = psi.norm();
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(psi.norm() - norm_before);
        traj.max_step_drift = std::max(traj.max_step_drift, drift);
        if (drift > kStepDriftLimit)
            throw StepTooLarge("evolve_pure: per-step norm drift exceeded 1e-6",
                               suggest_steps(n));

        traj.times.push_back((k + 1) * dt);
        traj.states.push_back(psi);
        h0 = h1;
    }
    return traj;
}

Trajectory evolve_mixed(const LoopSpec& loop, const Mat4& rho0) {
    loop.validate();
    const double scale = std::max(1.0, rho0.cwiseAbs().maxCoeff());
    if (hermiticity_defect(rho0) > 1e-9 * scale)
        throw NonPhysical("evolve_mixed: initial density matrix is not Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-9)
        throw NonPhysical("evolve_mixed: initial density matrix is not unit trace");
    {
        Eigen::SelfAdjointEigenSolver<Mat4> es(rho0);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NonPhysical("evolve_mixed: initial density matrix is not positive");
    }

    const int n = loop.n_steps;
    const double dt = loop.dt();
    const Complex mi(0.0, -1.0);

    Trajectory traj;
    traj.loop = loop;
    traj.times.reserve(n + 1);
    traj.rho_states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.rho_states.push_back(rho0);

    auto commutator = [&](const Mat4& h, const Mat4& r) -> Mat4 { return mi * (h * r - r * h); };

    Mat4 h0 = hamiltonian_at(loop.model, 0.0);
    Mat4 rho = rho0;
    for (int k = 0; k < n; ++k) {
        const double t = k * dt;
        const Mat4 hm = hamiltonian_at(loop.model, t + 0.5 * dt);
        const Mat4 h1 = hamiltonian_at(loop.model, t + dt);

        const Mat4 k1 = commutator(h0, rho);
        const Mat4 k2 = commutator(hm, rho + 0.5 * dt * k1);
        const Mat4 k3 = commutator(hm, rho + 0.5 * dt * k2);
        const Mat4 k4 = commutator(h1, rho + dt * k3);

        const double trace_before = rho.trace().real();
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(rho.trace().real() - trace_before);
        traj.max_step_drift = std::max(traj.max_step_drift, drift);
        if (drift > kStepDriftLimit)
            throw StepTooLarge("evolve_mixed: per-step trace drift exceeded 1e-6",
                               suggest_steps(n));

        traj.times.push_back((k + 1) * dt);
        traj.rho_states.push_back(rho);
        h0 = h1;
    }
    return traj;
}

AmplitudeSeries project_amplitudes(const Trajectory& traj,
                                   const std::vector<GaugeFixedFrame>& frames) {
    if (traj.mixed())
        throw InvalidParameter("project_amplitudes: pure trajectory required");
    check_times(traj.times, frames);

    AmplitudeSeries out;
    out.times = traj.times;
    out.dynamical_phases = accumulate_phases(frames);
    out.c.resize(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (int l = 0; l < 4; ++l) {
            const double ph = out.dynamical_phases[l][k];
            const Complex rot(std::cos(ph), std::sin(ph));
            out.c[k][l] = rot * frames[k].vectors.col(l).dot(traj.states[k]);
        }
    }
    return out;
}

AmplitudeSeries integrate_amplitudes(const LoopSpec& loop,
                                     const std::vector<GaugeFixedFrame>& frames,
                                     const std::array<Complex, 4>& c0,
                                     bool include_offdiagonal) {
    loop.validate();
    if (frames.size() < 5 || frames.size() % 2 == 0)
        throw FrameMismatch(
            "integrate_amplitudes: need closed loop frames with an even sample count");
    const std::size_t n2 = frames.size() - 1;  // fine grid steps, even
    for (int l = 0; l < 4; ++l)
        if (overlap_mag(frames[n2].vectors.col(l), frames[0].vectors.col(l)) < 0.999)
            throw FrameMismatch("integrate_amplitudes: frames do not close onto frame 0");

    // Connection matrices A(j,k) = <phi_j | dphi_k/dt> on the fine grid:
    // off-diagonal entries through dH/dt, diagonal ones from wrap-around
    // centered differences of the gauge-smoothed vectors.
    const double h_fine = frames[1].t - frames[0].t;
    std::vector<Mat4> conn(n2 + 1);
    for (std::size_t m = 0; m <= n2; ++m) {
        const Mat4 dh = hamiltonian_derivative_at(loop.model, frames[m].t);
        const double me_floor = 1e-10 * std::max(1.0, dh.cwiseAbs().maxCoeff());
        Mat4 a = Mat4::Zero();
        const std::size_t prev = m == 0 ? n2 - 1 : m - 1;
        const std::size_t next = m >= n2 ? 1 : m + 1;
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                if (j == k) {
                    const Vec4 diff = frames[next].vectors.col(j) - frames[prev].vectors.col(j);
                    a(j, j) = frames[m].vectors.col(j).dot(diff) / (2.0 * h_fine);
                } else {
                    const Complex me = frames[m].vectors.col(j).dot(dh * frames[m].vectors.col(k));
                    if (frames[m].deg[j][k]) {
                        // Degenerate pairs are tolerable only when the drive
                        // does not connect them.
                        if (std::abs(me) < me_floor) {
                            a(j, k) = Complex(0.0, 0.0);
                            continue;
                        }
                        throw DegenerateGap(
                            "integrate_amplitudes: degenerate levels along the path");
                    }
                    a(j, k) = me / (frames[m].values(k) - frames[m].values(j));
                }
            }
        }
        conn[m] = a;
    }

    const auto phi = accumulate_phases(frames);

    auto rhs = [&](std::size_t m, const Eigen::Vector4cd& c) -> Eigen::Vector4cd {
        Eigen::Vector4cd dc;
        for (int j = 0; j < 4; ++j) {
            Complex v = -conn[m](j, j) * c(j);
            if (include_offdiagonal) {
                for (int k = 0; k < 4; ++k) {
                    if (k == j) continue;
                    const double om = phi[j][m] - phi[k][m];  // int (E_j - E_k)
                    v -= Complex(std::cos(om), std::sin(om)) * conn[m](j, k) * c(k);
                }
            }
            dc(j) = v;
        }
        return dc;
    };

    const std::size_t n_big = n2 / 2;
    const double h = 2.0 * h_fine;

    AmplitudeSeries out;
    out.times.reserve(n_big + 1);
    out.c.reserve(n_big + 1);
    Eigen::Vector4cd c;
    for (int l = 0; l < 4; ++l) c(l) = c0[l];
    out.times.push_back(frames[0].t);
    out.c.push_back({c(0), c(1), c(2), c(3)});
    for (int l = 0; l < 4; ++l) out.dynamical_phases[l].push_back(phi[l][0]);

    for (std::size_t s = 0; s < n_big; ++s) {
        const std::size_t m0 = 2 * s, m1 = 2 * s + 1, m2 = 2 * s + 2;
        const Eigen::Vector4cd k1 = rhs(m0, c);
        const Eigen::Vector4cd k2 = rhs(m1, c + 0.5 * h * k1);
        const Eigen::Vector4cd k3 = rhs(m1, c + 0.5 * h * k2);
        const Eigen::Vector4cd k4 = rhs(m2, c + h * k3);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.times.push_back(frames[m2].t);
        out.c.push_back({c(0), c(1), c(2), c(3)});
        for (int l = 0; l < 4; ++l) out.dynamical_phases[l].push_back(phi[l][m2]);
    }
    return out;
}

}  // namespace qadia
