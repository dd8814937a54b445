// csv_io.hpp — Flat-file emission of trajectories and sweep results.
// Energies in units of omega0, times as lambda*t, 12 significant digits.

#pragma once

#include "qbat/analysis.hpp"

#include <iosfwd>
#include <string>

namespace qbat {

// One row per recorded step. Columns:
//   lambda_t,E_batt,E_i_batt,E_c_batt,meanE_batt,erg_charger,meanE_charger,n_pseudomode
void emit_trajectory_csv(const Trajectory& traj, std::ostream& out);

// One row per grid point. Columns:
//   <axis>,t_bar,E_bar,E_i_bar,E_c_bar,P_eff,Pcal_eff,which_maximum,flags
// Undefined efficiencies print the literal token "undefined"; failed points
// leave their numeric cells empty and carry an "error" flag.
void emit_sweep_csv(const SweepResult& result, std::ostream& out);

std::string format_csv_value(double v); // %.12g

} // namespace qbat
