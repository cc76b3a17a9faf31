#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oal/analytic.hpp"
#include "oal/config.hpp"
#include "oal/measures.hpp"

namespace oal {

/// One tabulated time point for one (branch, ordering) combination.  Fields
/// not selected in the scenario's measure set stay NaN and are not emitted.
struct ResultRow {
    double t_over_t0 = 0.0;
    Branch branch = Branch::plus;
    Ordering ordering = Ordering::with_ordering;
    Complex alpha_plus;
    Complex alpha_minus;
    double phi = 0.0;
    double prob = 0.0;
    Complex q;
    double T = 0.0;
    double P = 0.0;
    double TA = 0.0;
    double n_mean = 0.0;
    double oracle_fidelity = -1.0; ///< -1 when oracle mode is off
};

/// Evaluate the scenario on its time grid.  Rows are ordered by (time,
/// branch, ordering); grid points where the requested branch has numerically
/// zero detection probability are skipped.  The parallel kernel splits rows
/// across OpenMP threads and is bit-identical to the serial reference.
std::vector<ResultRow> run_scan(const ScenarioConfig& c, Execution exec = Execution::parallel);

/// Fock-space dimension a scenario needs: the configured value, or the
/// coherent sizing rule for the largest amplitude 2r when dim = 0.
int scan_dim(const ScenarioConfig& c);

/// Write rows as CSV (header + 12-significant-digit values, deterministic
/// byte-for-byte).  Returns the header line that was written.
std::string write_csv(std::ostream& os, const ScenarioConfig& c, const std::vector<ResultRow>& rows);

/// Convenience wrapper writing <out>/<stem>.csv plus a <stem>.legend.txt
/// sidecar describing columns and skipped rows.  Returns the CSV path.
std::string write_csv_with_legend(const ScenarioConfig& c, const std::vector<ResultRow>& rows,
                                  const std::string& stem);

} // namespace oal
