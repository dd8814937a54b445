#include "qbat/csv_io.hpp"

#include <cstdio>
#include <ostream>

namespace qbat {

std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "lambda_t,E_batt,E_i_batt,E_c_batt,meanE_batt,erg_charger,meanE_charger,"
           "n_pseudomode\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_csv_value(traj.times[i]) << ',' << format_csv_value(traj.battery[i].total)
            << ',' << format_csv_value(traj.battery[i].incoherent) << ','
            << format_csv_value(traj.battery[i].coherent) << ','
            << format_csv_value(traj.battery[i].mean_energy) << ','
            << format_csv_value(traj.charger[i].total) << ','
            << format_csv_value(traj.charger[i].mean_energy) << ','
            << format_csv_value(traj.pseudomode_occupation[i]) << '\n';
    }
}

void emit_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << axis_label(result.axis) << ",t_bar,E_bar,E_i_bar,E_c_bar,P_eff,Pcal_eff,"
           "which_maximum,flags\n";
    for (const SweepPoint& p : result.points) {
        out << format_csv_value(p.axis_value) << ',';
        if (p.report) {
            const ChargingReport& r = *p.report;
            out << format_csv_value(r.t_bar) << ',' << format_csv_value(r.ergotropy_at_tbar)
                << ',' << format_csv_value(r.breakdown_at_tbar.incoherent) << ','
                << format_csv_value(r.breakdown_at_tbar.coherent) << ',';
            out << (p.p_eff ? format_csv_value(*p.p_eff) : std::string("undefined")) << ',';
            out << (p.pcal_eff ? format_csv_value(*p.pcal_eff) : std::string("undefined")) << ',';
            out << r.which_maximum << ',';
        } else {
            out << ",,,,,,,";
        }
        for (std::size_t f = 0; f < p.flags.size(); ++f) {
            if (f) out << ';';
            out << p.flags[f];
        }
        out << '\n';
    }
}

} // namespace qbat
