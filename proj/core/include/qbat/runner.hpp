// runner.hpp — Executes a validated RunConfig: trajectory/report/sweep/
// critical dispatch, output files plus a ".meta" sidecar that round-trips
// the full configuration.

#pragma once

#include "qbat/run_config.hpp"

#include <iosfwd>

namespace qbat {

// Runs the configured computation, writing CSV output (and one sidecar per
// output file). Progress and the resolved configuration header go to `log`.
void execute_run(const RunConfig& cfg, std::ostream& log);

// Output path for a grid point in trajectory mode: "out.csv" becomes
// "out_c1_0.4.csv".
std::string trajectory_point_path(const std::string& out, const std::string& axis,
                                  double value);

} // namespace qbat
