#include "qadia/regimes.hpp"

#include <cmath>

#include "qadia/errors.hpp"

namespace qadia {

void RegimeThresholds::validate() const {
    if (!(adiabatic_eps > 0.0) || !(nontrans_eps > 0.0) || !(p_drift_eps > 0.0))
        throw InvalidParameter("RegimeThresholds: all thresholds must be positive");
}

char regime_letter(Regime r) {
    switch (r) {
        case Regime::AdiabaticA: return 'A';
        case Regime::QuasiAdiabatic1B: return 'B';
        case Regime::QuasiAdiabatic2C: return 'C';
        case Regime::NonAdiabaticD: return 'D';
    }
    return '?';
}

RegimeLabel classify(double gamma_max, double ratio_max, double p_drift_max,
                     const RegimeThresholds& th) {
    th.validate();
    // NaN and inf evidence (singular metrics) fail the comparison, which is
    // exactly the intended reading: a singular criterion is not satisfied.
    const bool adiabatic = gamma_max < th.adiabatic_eps;
    const bool nontransitional =
        ratio_max < th.nontrans_eps && p_drift_max < th.p_drift_eps;

    Regime r;
    if (adiabatic)
        r = nontransitional ? Regime::AdiabaticA : Regime::QuasiAdiabatic1B;
    else
        r = nontransitional ? Regime::QuasiAdiabatic2C : Regime::NonAdiabaticD;
    return RegimeLabel{r, gamma_max, ratio_max, p_drift_max};
}

}  // namespace qadia
