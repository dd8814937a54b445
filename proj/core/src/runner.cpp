#include "qbat/runner.hpp"

#include "qbat/closed_form.hpp"
#include "qbat/csv_io.hpp"
#include "qbat/errors.hpp"
#include "qbat/version.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace qbat {

namespace {

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_sidecar(const std::string& path, const RunConfig& cfg) {
    std::ostringstream meta;
    meta << "# qbat " << kVersion << "\n" << emit_config(cfg);
    write_file(path + ".meta", meta.str());
}

void run_trajectory_mode(const RunConfig& cfg, std::ostream& log) {
    std::vector<double> grid = cfg.grid;
    if (grid.empty()) grid.push_back(0.0); // single run, axis unused

    for (double value : grid) {
        ModelSpec model = cfg.model;
        ScenarioSpec scen = cfg.scenario;
        std::string path = cfg.out;
        if (!cfg.grid.empty()) {
            model = apply_axis(*cfg.axis, model, value);
            scen = apply_axis(*cfg.axis, scen, value);
            path = trajectory_point_path(cfg.out, axis_label(*cfg.axis), value);
        }
        const Trajectory traj = evolve(model, scen, cfg.integrator_for(model));
        std::ostringstream body;
        emit_trajectory_csv(traj, body);
        write_file(path, body.str());
        write_sidecar(path, cfg);
        log << "wrote " << path << " (" << traj.size() << " records)\n";
    }
}

void run_report_mode(const RunConfig& cfg, std::ostream& log) {
    const Trajectory traj = evolve(cfg.model, cfg.scenario, cfg.integrator_for(cfg.model));
    const ChargingReport report = charging_report(traj);
    const auto p = efficiency_output(traj, report);
    const auto pcal = efficiency_input(traj, report);

    log << "charging time lambda*t_bar = " << format_csv_value(report.t_bar)
        << (report.no_interior_maximum ? "  [no interior maximum; horizon endpoint]" : "")
        << "\n";
    log << "charged ergotropy E_bar    = " << format_csv_value(report.ergotropy_at_tbar)
        << "  (incoherent " << format_csv_value(report.breakdown_at_tbar.incoherent)
        << ", coherent " << format_csv_value(report.breakdown_at_tbar.coherent) << ")\n";
    log << "selected maximum index     = " << report.which_maximum << " of "
        << report.local_maxima.size() << "\n";
    log << "efficiency P               = " << (p ? format_csv_value(*p) : "undefined") << "\n";
    log << "efficiency Pcal            = " << (pcal ? format_csv_value(*pcal) : "undefined")
        << "\n";

    if (!cfg.out.empty()) {
        std::ostringstream body;
        emit_trajectory_csv(traj, body);
        write_file(cfg.out, body.str());
        write_sidecar(cfg.out, cfg);
        log << "wrote " << cfg.out << " (" << traj.size() << " records)\n";
    }
}

void run_sweep_mode(const RunConfig& cfg, std::ostream& log) {
    std::optional<IntegratorConfig> icfg;
    if (cfg.dt || cfg.t_max || cfg.record_stride) {
        icfg = cfg.integrator_for(cfg.model);
    }
    const SweepResult result =
        sweep(*cfg.axis, cfg.grid, cfg.model, cfg.scenario, icfg, cfg.threads);
    for (const SweepPoint& p : result.points) {
        if (!p.error.empty()) {
            log << "point " << axis_label(result.axis) << " = " << p.axis_value
                << " failed: " << p.error << "\n";
        }
    }
    std::ostringstream body;
    emit_sweep_csv(result, body);
    write_file(cfg.out, body.str());
    write_sidecar(cfg.out, cfg);
    log << "wrote " << cfg.out << " (" << result.points.size() << " points)\n";
}

void run_critical_mode(const RunConfig& cfg, std::ostream& log) {
    const auto [lo, hi] = *cfg.bracket;
    double value = 0.0;
    std::string parameter;

    if (*cfg.critical == CriticalKind::ResidualErgotropy) {
        parameter = "e1";
        // Charged ergotropy still above the e1 the battery started with
        // (both in omega0 units).
        auto predicate = [&](double e1) {
            const ScenarioSpec scen = apply_axis(SweepAxis::BatteryWeight, cfg.scenario, e1);
            const Trajectory traj = evolve(cfg.model, scen, cfg.integrator_for(cfg.model));
            return charging_report(traj).ergotropy_at_tbar > e1;
        };
        value = critical_parameter(predicate, lo, hi, cfg.bisect_tol);
    } else {
        parameter = "R";
        auto charged = [&](int n, double R) {
            const ModelSpec model = ModelSpec::from_coupling_ratio(n, cfg.model.m_cells, R);
            const ScenarioSpec scen =
                ProductChargers{std::vector<double>(static_cast<std::size_t>(n), 1.0)};
            const Trajectory traj =
                evolve(model, scen, IntegratorConfig::defaults(model, default_horizon(model)));
            return charging_report(traj).ergotropy_at_tbar;
        };
        auto predicate = [&](double R) { return charged(2, R) > charged(1, R); };
        value = critical_parameter(predicate, lo, hi, cfg.bisect_tol);
    }

    log << "critical " << parameter << " = " << format_csv_value(value) << "\n";
    if (!cfg.out.empty()) {
        std::ostringstream body;
        body << "parameter,value\n" << parameter << ',' << format_csv_value(value) << '\n';
        write_file(cfg.out, body.str());
        write_sidecar(cfg.out, cfg);
        log << "wrote " << cfg.out << "\n";
    }
}

} // namespace

std::string trajectory_point_path(const std::string& out, const std::string& axis,
                                  double value) {
    const std::size_t dot = out.find_last_of('.');
    const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
    const std::string ext = dot == std::string::npos ? "" : out.substr(dot);
    return stem + "_" + axis + "_" + format_csv_value(value) + ext;
}

void execute_run(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    // Full resolved configuration up front so every run is reproducible from
    // its log alone.
    log << "# qbat " << kVersion << "\n" << emit_config(cfg) << "\n";

    switch (cfg.mode) {
        case RunMode::Trajectory: run_trajectory_mode(cfg, log); break;
        case RunMode::Report: run_report_mode(cfg, log); break;
        case RunMode::Sweep: run_sweep_mode(cfg, log); break;
        case RunMode::Critical: run_critical_mode(cfg, log); break;
    }
}

} // namespace qbat
