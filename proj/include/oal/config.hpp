#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include "oal/params.hpp"

namespace oal {

enum class OrderingMode { with_ordering, without_ordering, both };
enum class BranchMode { plus, minus, both };

/// Column/measure selector for scans.
enum class Measure { T, P, TA, n, q, wigner };

/// One simulation scenario: system parameters, time grid (in units of the
/// recurrence period t0), which conditional branches / phase conventions to
/// tabulate, and which measures to evaluate.
struct ScenarioConfig {
    bool dimensionless = true; ///< (r, ratio) input; otherwise (g, omega12, omega23)
    double r = 0.5;
    double ratio = 50.0;
    double g = 0.0;
    double omega12 = 0.0;
    double omega23 = 0.0;

    double t_start = 0.0; ///< in units of t0
    double t_end = 1.0;   ///< in units of t0
    int n_points = 2000;  ///< grid points across [t_start, t_end]

    OrderingMode ordering = OrderingMode::both;
    BranchMode branch = BranchMode::both;
    std::set<Measure> measures = {Measure::T, Measure::P, Measure::TA, Measure::n, Measure::q};

    bool oracle = false; ///< also run the numeric propagator and record fidelity
    int dim = 0;         ///< Fock dimension; 0 = automatic from amplitude bound
    long steps = 0;      ///< propagator steps; 0 = default
    std::string out = "results";
    bool quiet = false;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parse "key = value" lines ('#' comments, blank lines allowed).  Unknown
/// keys, malformed values and inconsistent combinations raise ConfigError
/// with the offending line number.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

/// Resolve the configured parameterization into rates (validates them).
SystemParams to_params(const ScenarioConfig& c);

std::string to_string(OrderingMode m);
std::string to_string(BranchMode m);
std::string to_string(Measure m);

} // namespace oal
