#include "qadia/model.hpp"

#include <cmath>

#include "qadia/errors.hpp"

namespace qadia {

void ModelSpec::validate() const {
    if (!(theta >= 0.0 && theta <= pi))
        throw InvalidParameter("ModelSpec: theta must lie in [0, pi]");
    if (!std::isfinite(g)) throw InvalidParameter("ModelSpec: g must be finite");
    if (!std::isfinite(omega) || omega < 0.0)
        throw InvalidParameter("ModelSpec: omega must be finite and >= 0");
    if (!std::isfinite(phi0)) throw InvalidParameter("ModelSpec: phi0 must be finite");
}

LoopSpec LoopSpec::one_period(const ModelSpec& m, int n_steps) {
    m.validate();
    if (m.omega <= 0.0)
        throw InvalidParameter("LoopSpec::one_period: omega must be positive");
    return LoopSpec{m, 2.0 * pi / m.omega, n_steps};
}

void LoopSpec::validate() const {
    model.validate();
    if (!(period > 0.0) || !std::isfinite(period))
        throw InvalidParameter("LoopSpec: period must be positive and finite");
    if (n_steps < 16) throw InvalidParameter("LoopSpec: n_steps must be at least 16");
}

Mat4 coupling_matrix(CouplingKind kind) {
    Mat4 c = Mat4::Zero();
    switch (kind) {
        case CouplingKind::IsingZ:
            c(0, 0) = 1.0;
            c(1, 1) = -1.0;
            c(2, 2) = -1.0;
            c(3, 3) = 1.0;
            break;
        case CouplingKind::FlipFlop:
            // sigma1_+ sigma2_- + h.c. exchanges |up,down> and |down,up>.
            c(1, 2) = 1.0;
            c(2, 1) = 1.0;
            break;
        case CouplingKind::None:
            break;
    }
    return c;
}

Mat2 field_matrix(double theta, double phi) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    Mat2 m;
    m(0, 0) = ct;
    m(0, 1) = st * Complex(std::cos(phi), std::sin(phi));
    m(1, 0) = st * Complex(std::cos(phi), -std::sin(phi));
    m(1, 1) = -ct;
    return m;
}

Mat2 field_matrix_dphi(double theta, double phi) {
    const double st = std::sin(theta);
    Mat2 m = Mat2::Zero();
    m(0, 1) = st * Complex(-std::sin(phi), std::cos(phi));
    m(1, 0) = st * Complex(-std::sin(phi), -std::cos(phi));
    return m;
}

Mat4 hamiltonian_at(const ModelSpec& spec, double t) {
    spec.validate();
    const Mat2 field = field_matrix(spec.theta, spec.phase_at(t));
    Mat4 h = tensor(field, identity2());
    if (spec.coupling != CouplingKind::None) h += spec.g * coupling_matrix(spec.coupling);
    return h;
}

Mat4 hamiltonian_derivative_at(const ModelSpec& spec, double t) {
    spec.validate();
    const Mat2 dfield = field_matrix_dphi(spec.theta, spec.phase_at(t));
    return spec.omega * tensor(dfield, identity2());
}

}  // namespace qadia
