// qbat_main.cpp — Command-line front end: presets, config files, flag
// overrides, and the trajectory/report/sweep/critical run modes.

#include "qbat/errors.hpp"
#include "qbat/run_config.hpp"
#include "qbat/runner.hpp"
#include "qbat/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

// Exit codes by diagnostic category.
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerics = 4;
constexpr int kExitIo = 5;

qbat::ScenarioSpec scenario_from_flags(const std::string& kind, int n_chargers,
                                       const std::vector<double>& c, std::optional<double> e1) {
    using namespace qbat;
    auto c_or = [&](double fallback) { return c.empty() ? fallback : c.front(); };
    if (kind == "product") {
        std::vector<double> weights = c;
        if (weights.empty()) weights.assign(static_cast<std::size_t>(n_chargers), 1.0);
        if (weights.size() == 1 && n_chargers > 1) {
            weights.assign(static_cast<std::size_t>(n_chargers), weights.front());
        }
        return ProductChargers{std::move(weights)};
    }
    if (kind == "active-battery") return ActiveBattery{e1.value_or(0.0)};
    if (kind == "mixed-charger") return MixedCharger{c_or(0.0)};
    if (kind == "mixed-battery") return MixedBattery{e1.value_or(0.0)};
    if (kind == "bell-psi-plus") return BellChargers{BellKind::PsiPlus, c_or(0.5)};
    if (kind == "bell-psi-minus") return BellChargers{BellKind::PsiMinus, c_or(0.5)};
    if (kind == "bell-phi-plus") return BellChargers{BellKind::PhiPlus, c_or(0.5)};
    if (kind == "bell-phi-minus") return BellChargers{BellKind::PhiMinus, c_or(0.5)};
    throw qbat::ConfigError("unknown scenario '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reservoir-mediated charging of a qubit battery: trajectories, "
                 "figure-of-merit sweeps, and critical-parameter searches"};
    app.set_version_flag("--version", qbat::kVersion);

    std::string preset;
    std::string config_path;
    std::string mode;
    std::string scenario;
    std::optional<int> n_chargers;
    std::optional<int> m_cells;
    std::optional<double> coupling_ratio;
    std::vector<double> charger_weights;
    std::optional<double> e1;
    std::optional<int> ncut;
    std::optional<double> t_max;
    std::optional<double> dt;
    std::optional<int> record_stride;
    std::string sweep_axis;
    std::vector<double> sweep_grid;
    std::string critical_kind;
    std::vector<double> bracket;
    std::optional<double> bisect_tol;
    std::string out;
    std::optional<int> threads;

    app.add_option("--preset", preset, "Named parameter bundle (see --list-presets)");
    bool list_presets = false;
    app.add_flag("--list-presets", list_presets, "Print available preset names and exit");
    app.add_option("--config", config_path, "INI-style config file; flags override it");
    app.add_option("--mode", mode, "trajectory | report | sweep | critical");
    app.add_option("--scenario", scenario,
                   "product | active-battery | bell-psi-plus | bell-psi-minus | "
                   "bell-phi-plus | bell-phi-minus | mixed-charger | mixed-battery");
    app.add_option("--n", n_chargers, "Number of charging qubits");
    app.add_option("--m", m_cells, "Number of battery cells");
    app.add_option("--R", coupling_ratio, "Coupling ratio sqrt(2)*Omega/lambda");
    app.add_option("--c", charger_weights,
                   "Charger excited weight(s); repeatable, broadcast if single");
    app.add_option("--e1", e1, "Battery excited weight");
    app.add_option("--ncut", ncut, "Pseudomode truncation (default n+m, exact)");
    app.add_option("--tmax", t_max, "Horizon in lambda*t units");
    app.add_option("--dt", dt, "Step in lambda*t units");
    app.add_option("--record-stride", record_stride, "Store every k-th step");
    app.add_option("--sweep-axis", sweep_axis, "R | c1 | e1");
    app.add_option("--sweep-grid", sweep_grid, "Grid values (strictly increasing)");
    app.add_option("--critical-kind", critical_kind,
                   "residual-ergotropy | multi-charger-advantage");
    app.add_option("--bracket", bracket, "Bisection bracket lo hi")->expected(2);
    app.add_option("--bisect-tol", bisect_tol, "Bisection tolerance on the parameter");
    app.add_option("--out", out, "Output CSV path (sidecar <out>.meta records the config)");
    app.add_option("--threads", threads, "Sweep parallelism (default: QBAT_THREADS or cores)");

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const std::string& name : qbat::preset_names()) std::cout << name << "\n";
        return 0;
    }

    try {
        if (!preset.empty() && !config_path.empty()) {
            throw qbat::ConfigError("--preset and --config are mutually exclusive");
        }
        qbat::RunConfig cfg;
        if (!preset.empty()) cfg = qbat::preset_config(preset);
        if (!config_path.empty()) cfg = qbat::parse_config_file(config_path);

        if (!mode.empty()) {
            if (mode == "trajectory") {
                cfg.mode = qbat::RunMode::Trajectory;
            } else if (mode == "report") {
                cfg.mode = qbat::RunMode::Report;
            } else if (mode == "sweep") {
                cfg.mode = qbat::RunMode::Sweep;
            } else if (mode == "critical") {
                cfg.mode = qbat::RunMode::Critical;
            } else {
                throw qbat::ConfigError("unknown mode '" + mode + "'");
            }
        }

        if (n_chargers) cfg.model.n_chargers = *n_chargers;
        if (m_cells) cfg.model.m_cells = *m_cells;
        if (coupling_ratio) {
            cfg.model.Omega = *coupling_ratio * cfg.model.lambda / std::sqrt(2.0);
        }
        if (ncut) {
            cfg.model.ncut = *ncut;
        } else {
            cfg.model.ncut = std::max(cfg.model.ncut, cfg.model.num_qubits());
        }

        if (!scenario.empty()) {
            cfg.scenario = scenario_from_flags(scenario, cfg.model.n_chargers, charger_weights, e1);
        } else if (!charger_weights.empty() || e1) {
            // Refine the parameters of the scenario already selected.
            cfg.scenario = scenario_from_flags(qbat::scenario_label(cfg.scenario),
                                               cfg.model.n_chargers, charger_weights, e1);
        } else if (n_chargers) {
            // Keep product scenarios consistent with a changed register size.
            if (auto* p = std::get_if<qbat::ProductChargers>(&cfg.scenario)) {
                if (static_cast<int>(p->c.size()) != cfg.model.n_chargers && p->c.size() == 1) {
                    p->c.assign(static_cast<std::size_t>(cfg.model.n_chargers), p->c.front());
                }
            }
        }

        if (t_max) cfg.t_max = *t_max;
        if (dt) cfg.dt = *dt;
        if (record_stride) cfg.record_stride = *record_stride;
        if (!sweep_axis.empty()) {
            if (sweep_axis == "R") {
                cfg.axis = qbat::SweepAxis::CouplingRatio;
            } else if (sweep_axis == "c1") {
                cfg.axis = qbat::SweepAxis::ChargerWeight;
            } else if (sweep_axis == "e1") {
                cfg.axis = qbat::SweepAxis::BatteryWeight;
            } else {
                throw qbat::ConfigError("unknown sweep axis '" + sweep_axis + "'");
            }
        }
        if (!sweep_grid.empty()) cfg.grid = sweep_grid;
        if (!critical_kind.empty()) {
            if (critical_kind == "residual-ergotropy") {
                cfg.critical = qbat::CriticalKind::ResidualErgotropy;
            } else if (critical_kind == "multi-charger-advantage") {
                cfg.critical = qbat::CriticalKind::MultiChargerAdvantage;
            } else {
                throw qbat::ConfigError("unknown critical kind '" + critical_kind + "'");
            }
        }
        if (!bracket.empty()) cfg.bracket = std::make_pair(bracket[0], bracket[1]);
        if (bisect_tol) cfg.bisect_tol = *bisect_tol;
        if (!out.empty()) cfg.out = out;
        if (threads) cfg.threads = *threads;

        qbat::execute_run(cfg, std::cout);
        return 0;
    } catch (const qbat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qbat::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qbat::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qbat::NumericsError& e) {
        std::cerr << "numerics error: " << e.what() << "\n";
        return kExitNumerics;
    } catch (const qbat::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
