#pragma once

#include <string>

namespace qadia {

/// Operational thresholds for the "much less than one" conditions-.
/// adiabatic_eps bounds the composite metrics Gamma, nontrans_eps the
/// subsystem ratios R, and p_drift_eps the observed drift of the reduced
/// spectral weights.
struct RegimeThresholds {
    double adiabatic_eps = 0.1;
    double nontrans_eps = 0.1;
    double p_drift_eps = 1e-3;

    void validate() const;
};

enum class Regime {
    AdiabaticA,        // composite adiabatic, subsystems non-transitional
    QuasiAdiabatic1B,  // composite adiabatic, subsystems transitional
    QuasiAdiabatic2C,  // composite non-adiabatic, subsystems non-transitional
    NonAdiabaticD,     // neither
};

char regime_letter(Regime r);

struct RegimeLabel {
    Regime regime;
    double gamma_max;
    double ratio_max;
    double p_drift_max;
};

/// Classify a completed run from its evidence maxima. Singular evidence
/// (inf or NaN) fails the corresponding criterion.
RegimeLabel classify(double gamma_max, double ratio_max, double p_drift_max,
                     const RegimeThresholds& th = {});

}  // namespace qadia
