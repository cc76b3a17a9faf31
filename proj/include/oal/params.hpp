#pragma once

#include <cmath>

#include "oal/errors.hpp"

namespace oal {

/// Rates of the driven three-level atom + cavity system.  The two ground
/// states are coupled directly with Rabi frequency `omega12`; the cavity
/// couples one leg to the excited state with rate `g` and a classical drive
/// couples the other leg with Rabi frequency `omega23`.  Everything downstream
/// is expressed through the derived quantities below:
///
///   delta = g^2 / (2 omega12)   two-photon recurrence rate,
///   r     = omega23 / g         drive-to-coupling ratio,
///   t0    = 2 pi / delta        recurrence period.
struct SystemParams {
    double g;
    double omega12;
    double omega23;

    SystemParams(double g_, double omega12_, double omega23_) : g(g_), omega12(omega12_), omega23(omega23_) {
        if (!(g > 0.0))
            throw ConfigError("SystemParams: cavity coupling g must be > 0");
        if (!(omega12 > 0.0))
            throw ConfigError("SystemParams: ground-state Rabi frequency omega12 must be > 0");
        if (!(omega23 >= 0.0))
            throw ConfigError("SystemParams: drive Rabi frequency omega23 must be >= 0");
    }

    /// Dimensionless parameterization: fixes delta = 1 and takes the ratio
    /// omega12/delta together with r = omega23/g.
    static SystemParams dimensionless(double r, double ratio) {
        if (!(ratio > 0.0))
            throw ConfigError("SystemParams: omega12/delta ratio must be > 0");
        if (!(r >= 0.0))
            throw ConfigError("SystemParams: r = omega23/g must be >= 0");
        const double omega12 = ratio;             // delta = 1
        const double g = std::sqrt(2.0 * ratio);  // g^2/(2 omega12) = 1
        return SystemParams(g, omega12, r * g);
    }

    double delta() const { return g * g / (2.0 * omega12); }
    double r() const { return omega23 / g; }
    double t0() const { return 2.0 * M_PI / delta(); }

    /// True when the ground-state coupling dominates both the cavity coupling
    /// and the drive by the usual factor-of-five margin.
    bool strong_coupling() const { return omega12 >= 5.0 * std::max(g, omega23); }
};

/// (omega * t) mod 2pi, computed with an fma-based double-double product so
/// the reduced phase stays accurate even when omega * t is many thousands of
/// radians.  Result lies in [0, 2pi).
double reduce_phase(double omega, double t);

/// Fold an already-small angle into [0, 2pi).
double fold_2pi(double angle);

} // namespace oal
