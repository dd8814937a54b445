// analysis.hpp — Figures of merit extracted from trajectories: charging time
// (time of the dominant ergotropy maximum), charged ergotropy, conversion
// efficiencies, parameter sweeps, and bisection for critical parameters.

#pragma once

#include "qbat/dynamics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qbat {

struct ChargingReport {
    double t_bar = 0.0;             // lambda*t of the selected maximum
    double ergotropy_at_tbar = 0.0; // units of omega0
    ErgotropyBreakdown breakdown_at_tbar;
    std::vector<std::pair<double, double>> local_maxima; // (lambda*t, ergotropy)
    int which_maximum = 0;          // 1-based index into local_maxima; 0 if none
    bool no_interior_maximum = false;
    std::size_t sample_index = 0;   // recorded sample closest to t_bar
};

// Detects all interior local maxima of the battery ergotropy (strict
// neighbor comparison on the recorded grid), refines each by quadratic
// interpolation through the three bracketing samples, and selects the
// largest over the horizon. A monotone record (no interior maximum) reports
// the final sample and sets no_interior_maximum.
ChargingReport charging_report(const Trajectory& traj);

// Charged ergotropy over charger energy output,
//   max{0, E(t_bar) - E(0)} / tr[(rho_ch(0) - rho_ch(t_bar)) H_ch].
// nullopt when the denominator is not positive (charger kept or gained
// energy), including the fully decoupled case.
std::optional<double> efficiency_output(const Trajectory& traj, const ChargingReport& report);

// Charged ergotropy over battery energy gain,
//   max{0, E(t_bar) - E(0)} / tr[(rho_ba(t_bar) - rho_ba(0)) H_ba].
std::optional<double> efficiency_input(const Trajectory& traj, const ChargingReport& report);

// Horizon heuristic: three periods of the collective oscillation in the
// strong-coupling regime, a fixed lambda*t = 30 in the weak one.
double default_horizon(const ModelSpec& spec);

enum class SweepAxis { CouplingRatio, ChargerWeight, BatteryWeight };

std::string axis_label(SweepAxis axis);
ModelSpec apply_axis(SweepAxis axis, const ModelSpec& base, double value);
ScenarioSpec apply_axis(SweepAxis axis, const ScenarioSpec& base, double value);

struct SweepPoint {
    double axis_value = 0.0;
    std::optional<ChargingReport> report;
    std::optional<double> p_eff;    // efficiency_output
    std::optional<double> pcal_eff; // efficiency_input
    std::vector<std::string> flags;
    std::string error; // nonempty when the point failed; sweep continues
};

struct SweepResult {
    SweepAxis axis = SweepAxis::CouplingRatio;
    std::vector<double> grid;
    std::vector<SweepPoint> points;
    ModelSpec base_model;
    ScenarioSpec base_scenario;
    std::optional<IntegratorConfig> integrator; // per-point defaults if unset
};

// Runs evolve + charging_report + efficiencies per grid point. Points are
// independent; `threads` <= 0 picks the QBAT_THREADS environment variable,
// then hardware concurrency. Per-point failures are recorded on the point,
// never aborting the sweep. Grid must be strictly increasing.
SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, const ModelSpec& base_model,
                  const ScenarioSpec& base_scenario,
                  const std::optional<IntegratorConfig>& cfg = std::nullopt, int threads = 0);

// Bisection for the crossing point of a monotone predicate, to absolute
// tolerance `tol` on the parameter. Both bracket ends are evaluated first;
// equal predicate values raise NumericsError.
double critical_parameter(const std::function<bool(double)>& predicate, double lo, double hi,
                          double tol = 1e-3);

int sweep_thread_count(int requested = 0);

} // namespace qbat
