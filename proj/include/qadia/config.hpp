#pragma once

#include <string>

#include "qadia/model.hpp"
#include "qadia/regimes.hpp"
#include "qadia/types.hpp"

namespace qadia {

/// One run described by a flat "key = value" config file ('#' comments,
/// unknown or duplicate keys rejected with the offending line number).
///
/// Keys: coupling (ising_z | flip_flop | none), g, theta, omega, phi0,
/// n_steps, seed_state, adiabatic_eps, nontrans_eps, p_drift_eps,
/// output_path, and the sweep grid theta_min/theta_max/theta_count,
/// g_min/g_max/g_count.
///
/// seed_state grammar:
///   phi1 .. phi4            instantaneous eigenstate at t = 0
///   8 reals                 re0 im0 .. re3 im3 of a pure state (normalized)
///   mixed: 16 reals         d0 d1 d2 d3 then re/im of the upper triangle
///                           (01, 02, 03, 12, 13, 23) of a density matrix
struct RunConfig {
    ModelSpec model;
    int n_steps = 4096;
    std::string seed_state = "phi1";
    RegimeThresholds thresholds;
    std::string output_path;

    double theta_min = 0.0;
    double theta_max = pi;
    int theta_count = 101;
    double g_min = 0.0;
    double g_max = 3.0;
    int g_count = 101;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// A resolved initial state. label is 1..4 for phiN seeds, 0 otherwise.
struct SeedState {
    bool mixed = false;
    Vec4 psi = Vec4::Zero();
    Mat4 rho = Mat4::Zero();
    int label = 0;
};

/// Build the initial state described by cfg.seed_state for the model at t=0.
/// Throws ConfigError for malformed seeds and NonPhysical for bad densities.
SeedState resolve_seed(const RunConfig& cfg);

}  // namespace qadia
