#pragma once

#include <array>
#include <vector>

#include "qadia/model.hpp"
#include "qadia/spectra.hpp"

namespace qadia {

/// Time-sampled evolution of the composite system over one loop. Either
/// states (pure runs) or rho_states (mixed runs) is populated. States are
/// never silently renormalized; max_step_drift records the worst per-step
/// norm (or trace) drift of the integrator.
struct Trajectory {
    LoopSpec loop;
    std::vector<double> times;
    std::vector<Vec4> states;
    std::vector<Mat4> rho_states;
    double max_step_drift = 0.0;

    bool mixed() const { return !rho_states.empty(); }
    std::size_t n_samples() const { return times.size(); }
};

/// Fixed-step RK4 integration of i d/dt |psi> = H(t) |psi>.
/// Throws StepTooLarge if any single step drifts the norm by more than 1e-6.
Trajectory evolve_pure(const LoopSpec& loop, const Vec4& psi0);

/// Fixed-step RK4 integration of i d/dt rho = [H(t), rho].
Trajectory evolve_mixed(const LoopSpec& loop, const Mat4& rho0);

/// Amplitudes in the instantaneous eigenbasis with the accumulated dynamical
/// phases removed: psi(t) = sum_j c_j(t) e^{-i Phi_j(t)} |phi_j(t)>, where
/// Phi_j(t) is the cumulative trapezoid of E_j.
struct AmplitudeSeries {
    std::vector<double> times;
    std::vector<std::array<Complex, 4>> c;
    std::array<std::vector<double>, 4> dynamical_phases;  // Phi_j per label
};

/// c_j(t_k) = e^{+i Phi_j(t_k)} <phi_j(t_k)|psi(t_k)> on a pure trajectory;
/// frames must be sampled at the trajectory times.
AmplitudeSeries project_amplitudes(const Trajectory& traj,
                                   const std::vector<GaugeFixedFrame>& frames);

/// Direct integration of the amplitude equation
///   dc_j/dt = -<phi_j|dphi_j/dt> c_j - sum_{k!=j} e^{i(Phi_j-Phi_k)} <phi_j|dphi_k/dt> c_k
/// with RK4. frames must be closed loop frames with an even sample count
/// 2M (2M+1 entries); the integrator steps T/M using the odd entries as
/// midpoints and reports amplitudes on the even entries.
/// include_offdiagonal = false drops the right-hand sum, which reduces each
/// amplitude to a pure phase (the holonomy of its label).
AmplitudeSeries integrate_amplitudes(const LoopSpec& loop,
                                     const std::vector<GaugeFixedFrame>& frames,
                                     const std::array<Complex, 4>& c0,
                                     bool include_offdiagonal = true);

}  // namespace qadia
