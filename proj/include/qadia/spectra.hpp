#pragma once

#include <array>
#include <vector>

#include "qadia/linalg.hpp"
#include "qadia/model.hpp"

namespace qadia {

/// Instantaneous eigensystem in label order 1..4 with a deterministic gauge.
/// For IsingZ/None the labels follow the closed-form branches
///   E1 = +sqrt(g^2+1+2g cos(theta)),  E2 = -E1,
///   E3 = +sqrt(g^2+1-2g cos(theta)),  E4 = -E3;
/// for FlipFlop they are assigned (max, min, 2nd max, 2nd min) at the first
/// frame and tracked by continuity afterwards.
struct GaugeFixedFrame {
    double t = 0.0;
    Eigen::Vector4d values;  // E_label, label = index + 1
    Mat4 vectors;            // column j = |phi_{j+1}>
    std::array<std::array<bool, 4>, 4> deg{};  // pairwise degeneracy flags

    bool degenerate(int label_i, int label_j) const {  // labels 1..4
        return deg[label_i - 1][label_j - 1];
    }
    bool label_degenerate(int label) const;
};

/// Closed-form eigensystem (IsingZ or None only), label order 1..4.
/// Throws UnsupportedModel for FlipFlop.
EigenPairSet analytic_eigensystem(const ModelSpec& spec, double t);

/// Numeric eigensystem relabeled to the conventions above. Labels come from
/// overlap with the closed forms (IsingZ/None) or with prev (FlipFlop, or as
/// fallback); the gauge is the largest-component-real-positive rule, or
/// phase continuity against prev when given.
GaugeFixedFrame numeric_eigensystem(const ModelSpec& spec, double t,
                                    const GaugeFixedFrame* prev = nullptr,
                                    double rel_deg_tol = 1e-8);

/// Frames at n_samples+1 equally spaced times covering one loop, in a smooth
/// gauge that closes exactly: the final frame is the first one, and the
/// holonomy of each label is spread uniformly along the path so saved
/// eigenvector paths are single valued and periodic.
std::vector<GaugeFixedFrame> loop_frames(const LoopSpec& loop, int n_samples = -1);

/// Adiabaticity metric for one label pair (1-based), evaluated from a frame
/// and dH/dt as |<phi_i| dH/dt |phi_j>| / (E_i - E_j)^2.
/// Throws DegenerateGap when the pair is degenerate.
double gamma_from_frame(const GaugeFixedFrame& frame, const Mat4& dHdt, int i, int j);

/// Same metric built from the model at time t.
double gamma_metric(const ModelSpec& spec, double t, int i, int j,
                    double rel_deg_tol = 1e-8);

/// Adiabaticity metrics for the in-block pairs (1,2) and (3,4) over a
/// (theta, g) grid at fixed omega. Row-major over (theta, g); degenerate
/// cells carry +inf and a singular flag.
struct GammaSurface {
    std::vector<double> thetas;
    std::vector<double> gs;
    std::vector<double> gamma12, gamma34;
    std::vector<std::uint8_t> singular12, singular34;

    std::size_t index(std::size_t it, std::size_t ig) const { return it * gs.size() + ig; }
};

GammaSurface gamma_surface(CouplingKind coupling, double omega,
                           const std::vector<double>& thetas,
                           const std::vector<double>& gs, int jobs = 0);

/// Uniform grid helper, count >= 2 endpoints included.
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace qadia
