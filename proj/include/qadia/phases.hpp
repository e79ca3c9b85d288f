#pragma once

#include <array>
#include <vector>

#include "qadia/dynamics.hpp"
#include "qadia/spectra.hpp"

namespace qadia {

/// Phases of one cyclic pure-state evolution. The geometric phase is the
/// total phase arg<psi(0)|psi(T)> minus the accumulated dynamical phase
/// -int <psi|H|psi> dt, wrapped to (-pi, pi].
struct LoopPhases {
    double total = 0.0;        // arg<psi(0)|psi(T)>, (-pi, pi]
    double dynamical = 0.0;    // -int <psi|H|psi> dt, unwrapped
    double geometric = 0.0;    // wrap(total - dynamical)
    double cyclic_overlap = 0.0;  // |<psi(0)|psi(T)>|
    bool well_conditioned = true;  // overlap >= 0.1
};

LoopPhases geometric_phase(const Trajectory& traj);

/// Gauge-invariant discrete holonomy of one eigenvector label around a
/// closed loop of frames: -arg prod_k <phi_n(t_k)|phi_n(t_{k+1})> with the
/// last link closing onto frame 0. Converges to the line integral
/// i int <phi_n|dphi_n/dt> dt at second order in the sample spacing.
/// Throws DegenerateGap if the label is degenerate anywhere on the loop.
double berry_phase(const std::vector<GaugeFixedFrame>& frames, int label);

/// Accumulated dynamical phase differences Omega(j,k) = int_0^T (E_k - E_j) dt.
Eigen::Matrix4d omega_matrix(const std::vector<GaugeFixedFrame>& frames);

/// First-order end-of-loop amplitudes for a run seeded in label n:
/// c_n(T) = e^{i gamma_n(T)} and, for m != n,
/// c_m(T) = e^{i(Omega_nm(T) + gamma_n(T))} <phi_m(T)|dphi_n/dt(T)> / (E_m - E_n).
/// frames must be closed loop frames of loop.
std::array<Complex, 4> perturbative_amplitudes(const LoopSpec& loop,
                                               const std::vector<GaugeFixedFrame>& frames,
                                               int seed_label);

/// Perturbative geometric-phase estimates for a loop seeded in one label.
/// phi_18 = arg[e^{i gamma_n} + sum_{m!=n} c_m(T)] with the end-of-loop
/// first-order transition amplitudes; phi_19 is its expansion to first order
/// in the correction. Both reduce to the holonomy gamma_n as the
/// adiabaticity metrics vanish.
struct PerturbativePhases {
    double gamma_n = 0.0;
    double phi_18 = 0.0;
    double phi_19 = 0.0;
    double gamma_metric_max = 0.0;  // max_m Gamma_mn at loop closure
};

PerturbativePhases geometric_phase_perturbative(const LoopSpec& loop,
                                                const std::vector<GaugeFixedFrame>& frames,
                                                int seed_label);

/// Everything the CLI reports for one loop.
struct PhaseReport {
    LoopPhases loop;
    std::array<double, 4> berry{};      // NaN where a label is degenerate
    bool has_perturbative = false;
    PerturbativePhases perturbative;
    Eigen::Matrix4d omega;
};

PhaseReport make_phase_report(const Trajectory& traj,
                              const std::vector<GaugeFixedFrame>& frames,
                              int seed_label /* 0 when unknown */);

}  // namespace qadia
