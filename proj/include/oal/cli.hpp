#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oal/config.hpp"

namespace oal {

/// Exit codes shared by all subcommands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_convergence_error = 3;

/// Tabulate conditional-state measures over the configured time grid.
int cmd_simulate(const ScenarioConfig& c, std::ostream& out, std::ostream& err);

/// Emit the preset scenario behind one of the standard plots:
/// "amplitudes", "noise", "parity", "relative-noise".
int cmd_figure(const std::string& name, const ScenarioConfig& base, std::ostream& out, std::ostream& err);

/// Report the drive ratio at which the time-ordering phase correction over
/// half a recurrence reaches `fraction` of pi, plus the mean photon numbers
/// of the even/odd/90-degree cat states at the corresponding amplitude.
int cmd_critical(double fraction, std::ostream& out, std::ostream& err);

/// Cross-validate the closed-form solution against the numeric propagators;
/// prints one pass/fail line per check.
int cmd_validate(const ScenarioConfig& c, std::ostream& out, std::ostream& err);

/// Run the scenario once per r value, one CSV per run.
int cmd_sweep(const std::vector<double>& rs, const ScenarioConfig& base, std::ostream& out, std::ostream& err);

/// Full argv-level entry point (parses flags, dispatches, maps exceptions to
/// exit codes).  Used by main() and exercised directly in tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace oal
