#pragma once

#include "qadia/linalg.hpp"
#include "qadia/types.hpp"

namespace qadia {

enum class CouplingKind { IsingZ, FlipFlop, None };

/// Dimensionless driven two-qubit model. Energies are measured in units of
/// mu*B0/2 and time in units of 2/(mu*B0); g = 2J/(mu*B0) is the rescaled
/// exchange coupling and omega the precession rate of the drive field
/// n(phi) = (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)), phi = phi0 + omega*t.
struct ModelSpec {
    CouplingKind coupling = CouplingKind::IsingZ;
    double g = 0.0;
    double theta = pi / 2;  // polar angle of the drive, [0, pi]
    double omega = 1.0;     // >= 0
    double phi0 = 0.0;

    void validate() const;  // throws InvalidParameter
    double phase_at(double t) const { return phi0 + omega * t; }
};

/// One transport loop of the drive field. For omega > 0 the natural period
/// is 2*pi/omega; a static model (omega = 0) needs an explicit duration.
struct LoopSpec {
    ModelSpec model;
    double period = 0.0;
    int n_steps = 4096;

    static LoopSpec one_period(const ModelSpec& m, int n_steps = 4096);
    void validate() const;
    double dt() const { return period / n_steps; }
};

/// Static coupling matrix C in H = g*C + drive. IsingZ: sigma1_z sigma2_z;
/// FlipFlop: sigma1_+ sigma2_- + sigma1_- sigma2_+; None: 0.
Mat4 coupling_matrix(CouplingKind kind);

/// Single-qubit drive term n(theta, phi) . sigma. The upper-right entry is
/// sin(theta) e^{+i phi}, so the instantaneous +1 eigenvector carries its
/// spin-down amplitude as e^{-i phi}.
Mat2 field_matrix(double theta, double phi);

/// d/dphi of field_matrix.
Mat2 field_matrix_dphi(double theta, double phi);

/// Hamiltonian at time t, exactly Hermitian by construction.
Mat4 hamiltonian_at(const ModelSpec& spec, double t);

/// Analytic dH/dt at time t (the coupling term is static).
Mat4 hamiltonian_derivative_at(const ModelSpec& spec, double t);

}  // namespace qadia
