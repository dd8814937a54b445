#include "qbat/run_config.hpp"

#include "qbat/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qbat {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
    if (pos != value.size()) {
        throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& value, const std::string& key) {
    const double d = parse_double(value, key);
    const int i = static_cast<int>(std::llround(d));
    if (std::abs(d - i) > 0.0) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return i;
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list entry");
        out.push_back(parse_double(item, key));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

RunMode parse_mode(const std::string& v) {
    if (v == "trajectory") return RunMode::Trajectory;
    if (v == "report") return RunMode::Report;
    if (v == "sweep") return RunMode::Sweep;
    if (v == "critical") return RunMode::Critical;
    throw ConfigError("key 'mode': unknown value '" + v + "'");
}

SweepAxis parse_axis(const std::string& v) {
    if (v == "R") return SweepAxis::CouplingRatio;
    if (v == "c1") return SweepAxis::ChargerWeight;
    if (v == "e1") return SweepAxis::BatteryWeight;
    throw ConfigError("key 'axis': unknown value '" + v + "' (expected R, c1, or e1)");
}

CriticalKind parse_critical_kind(const std::string& v) {
    if (v == "residual-ergotropy") return CriticalKind::ResidualErgotropy;
    if (v == "multi-charger-advantage") return CriticalKind::MultiChargerAdvantage;
    throw ConfigError("key 'kind': unknown critical kind '" + v + "'");
}

// Raw key/value view of the scenario section; materialized once n is known.
struct ScenarioDraft {
    std::string kind = "product";
    std::optional<std::vector<double>> c;
    std::optional<double> c1;
    std::optional<double> e1;
};

ScenarioSpec materialize_scenario(const ScenarioDraft& d, int n_chargers) {
    auto forbid = [&](bool bad, const char* key) {
        if (bad) {
            throw ConfigError("scenario '" + d.kind + "' does not take key '" + key + "'");
        }
    };
    if (d.kind == "product") {
        forbid(d.c1.has_value(), "c1");
        forbid(d.e1.has_value(), "e1");
        std::vector<double> c = d.c.value_or(std::vector<double>{1.0});
        if (c.size() == 1 && n_chargers > 1) {
            c.assign(static_cast<std::size_t>(n_chargers), c[0]);
        }
        return ProductChargers{std::move(c)};
    }
    if (d.kind == "active-battery") {
        forbid(d.c.has_value(), "c");
        forbid(d.c1.has_value(), "c1");
        return ActiveBattery{d.e1.value_or(0.0)};
    }
    if (d.kind == "mixed-charger") {
        forbid(d.c.has_value(), "c");
        forbid(d.e1.has_value(), "e1");
        return MixedCharger{d.c1.value_or(0.0)};
    }
    if (d.kind == "mixed-battery") {
        forbid(d.c.has_value(), "c");
        forbid(d.c1.has_value(), "c1");
        return MixedBattery{d.e1.value_or(0.0)};
    }
    BellKind bell;
    if (d.kind == "bell-psi-plus") {
        bell = BellKind::PsiPlus;
    } else if (d.kind == "bell-psi-minus") {
        bell = BellKind::PsiMinus;
    } else if (d.kind == "bell-phi-plus") {
        bell = BellKind::PhiPlus;
    } else if (d.kind == "bell-phi-minus") {
        bell = BellKind::PhiMinus;
    } else {
        throw ConfigError("key 'kind': unknown scenario '" + d.kind + "'");
    }
    forbid(d.c.has_value(), "c");
    forbid(d.e1.has_value(), "e1");
    return BellChargers{bell, d.c1.value_or(0.5)};
}

} // namespace

void RunConfig::validate() const {
    model.validate();
    validate_scenario(model, scenario);
    if (dt && !(*dt > 0.0)) throw ConfigError("key 'dt': must be positive");
    if (t_max && !(*t_max > 0.0)) throw ConfigError("key 't_max': must be positive");
    if (record_stride && *record_stride < 1) {
        throw ConfigError("key 'record_stride': must be >= 1");
    }
    if (threads < 0) throw ConfigError("key 'threads': must be >= 0");
    if (!(bisect_tol > 0.0)) throw ConfigError("key 'tol': must be positive");

    const bool needs_axis = mode == RunMode::Sweep;
    if (needs_axis && !axis) throw ConfigError("sweep mode requires key 'axis'");
    if (needs_axis && grid.empty()) throw ConfigError("sweep mode requires key 'grid'");
    if (mode == RunMode::Critical) {
        if (!critical) throw ConfigError("critical mode requires key 'kind'");
        if (!bracket) throw ConfigError("critical mode requires key 'bracket'");
        if (!(bracket->first < bracket->second)) {
            throw ConfigError("key 'bracket': expected lo < hi");
        }
    }
    if (mode != RunMode::Report && out.empty()) {
        throw ConfigError("key 'out' is required for mode '" + std::string(mode_label(mode)) +
                          "'");
    }
    if (!grid.empty()) {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i] > grid[i - 1])) {
                throw ConfigError("key 'grid': values must be strictly increasing");
            }
        }
        if (mode == RunMode::Trajectory && !axis) {
            throw ConfigError("trajectory mode with a grid requires key 'axis'");
        }
    }
}

IntegratorConfig RunConfig::integrator_for(const ModelSpec& spec) const {
    const double horizon = t_max.value_or(default_horizon(spec));
    IntegratorConfig cfg = IntegratorConfig::defaults(spec, horizon);
    if (dt) cfg.dt = *dt;
    if (record_stride) {
        cfg.record_stride = *record_stride;
    } else if (dt) {
        cfg.record_stride = std::max(1, static_cast<int>(horizon / cfg.dt / 4000.0));
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    ScenarioDraft scen;
    std::optional<double> coupling_ratio;
    std::optional<double> omega_explicit;
    std::optional<int> ncut_explicit;

    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "model" && section != "scenario" &&
                section != "integrator" && section != "sweep" && section != "critical") {
                throw ConfigError("unknown section '[" + section + "]'");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        }
        if (section.empty()) {
            throw ConfigError("key '" + key + "' appears before any section header");
        }

        if (section == "run") {
            if (key == "mode") {
                cfg.mode = parse_mode(value);
            } else if (key == "out") {
                cfg.out = value;
            } else if (key == "threads") {
                cfg.threads = parse_int(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [run]");
            }
        } else if (section == "model") {
            if (key == "n") {
                cfg.model.n_chargers = parse_int(value, key);
            } else if (key == "m") {
                cfg.model.m_cells = parse_int(value, key);
            } else if (key == "R") {
                coupling_ratio = parse_double(value, key);
            } else if (key == "omega0") {
                cfg.model.omega0 = parse_double(value, key);
            } else if (key == "Omega") {
                omega_explicit = parse_double(value, key);
            } else if (key == "lambda") {
                cfg.model.lambda = parse_double(value, key);
            } else if (key == "ncut") {
                ncut_explicit = parse_int(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [model]");
            }
        } else if (section == "scenario") {
            if (key == "kind") {
                scen.kind = value;
            } else if (key == "c") {
                scen.c = parse_list(value, key);
            } else if (key == "c1") {
                scen.c1 = parse_double(value, key);
            } else if (key == "e1") {
                scen.e1 = parse_double(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [scenario]");
            }
        } else if (section == "integrator") {
            if (key == "dt") {
                cfg.dt = parse_double(value, key);
            } else if (key == "t_max") {
                cfg.t_max = parse_double(value, key);
            } else if (key == "record_stride") {
                cfg.record_stride = parse_int(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [integrator]");
            }
        } else if (section == "sweep") {
            if (key == "axis") {
                cfg.axis = parse_axis(value);
            } else if (key == "grid") {
                cfg.grid = parse_list(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [sweep]");
            }
        } else { // critical
            if (key == "kind") {
                cfg.critical = parse_critical_kind(value);
            } else if (key == "bracket") {
                const auto pair = parse_list(value, key);
                if (pair.size() != 2) {
                    throw ConfigError("key 'bracket': expected exactly two values");
                }
                cfg.bracket = std::make_pair(pair[0], pair[1]);
            } else if (key == "tol") {
                cfg.bisect_tol = parse_double(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in section [critical]");
            }
        }
    }

    if (coupling_ratio && omega_explicit) {
        throw ConfigError("keys 'R' and 'Omega' are mutually exclusive");
    }
    if (coupling_ratio) {
        cfg.model.Omega = *coupling_ratio * cfg.model.lambda / std::sqrt(2.0);
    } else if (omega_explicit) {
        cfg.model.Omega = *omega_explicit;
    }
    // ncut defaults to the exact truncation; explicit smaller values are
    // rejected by validate().
    cfg.model.ncut = ncut_explicit.value_or(cfg.model.num_qubits());
    cfg.scenario = materialize_scenario(scen, cfg.model.n_chargers);
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[run]\n";
    out << "mode = " << mode_label(cfg.mode) << "\n";
    if (!cfg.out.empty()) out << "out = " << cfg.out << "\n";
    out << "threads = " << cfg.threads << "\n";

    out << "\n[model]\n";
    out << "n = " << cfg.model.n_chargers << "\n";
    out << "m = " << cfg.model.m_cells << "\n";
    out << "omega0 = " << format_double(cfg.model.omega0) << "\n";
    out << "Omega = " << format_double(cfg.model.Omega) << "\n";
    out << "lambda = " << format_double(cfg.model.lambda) << "\n";
    out << "ncut = " << cfg.model.ncut << "\n";

    out << "\n[scenario]\n";
    out << "kind = " << scenario_label(cfg.scenario) << "\n";
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ProductChargers>) {
                out << "c = " << format_list(s.c) << "\n";
            } else if constexpr (std::is_same_v<T, ActiveBattery>) {
                out << "e1 = " << format_double(s.e1) << "\n";
            } else if constexpr (std::is_same_v<T, BellChargers>) {
                out << "c1 = " << format_double(s.c1) << "\n";
            } else if constexpr (std::is_same_v<T, MixedCharger>) {
                out << "c1 = " << format_double(s.c1) << "\n";
            } else if constexpr (std::is_same_v<T, MixedBattery>) {
                out << "e1 = " << format_double(s.e1) << "\n";
            }
        },
        cfg.scenario);

    if (cfg.dt || cfg.t_max || cfg.record_stride) {
        out << "\n[integrator]\n";
        if (cfg.dt) out << "dt = " << format_double(*cfg.dt) << "\n";
        if (cfg.t_max) out << "t_max = " << format_double(*cfg.t_max) << "\n";
        if (cfg.record_stride) out << "record_stride = " << *cfg.record_stride << "\n";
    }
    if (cfg.axis || !cfg.grid.empty()) {
        out << "\n[sweep]\n";
        if (cfg.axis) out << "axis = " << axis_label(*cfg.axis) << "\n";
        if (!cfg.grid.empty()) out << "grid = " << format_list(cfg.grid) << "\n";
    }
    if (cfg.critical || cfg.bracket) {
        out << "\n[critical]\n";
        if (cfg.critical) out << "kind = " << critical_label(*cfg.critical) << "\n";
        if (cfg.bracket) {
            out << "bracket = " << format_double(cfg.bracket->first) << ","
                << format_double(cfg.bracket->second) << "\n";
        }
        out << "tol = " << format_double(cfg.bisect_tol) << "\n";
    }
    return out.str();
}

const char* mode_label(RunMode mode) {
    switch (mode) {
        case RunMode::Trajectory: return "trajectory";
        case RunMode::Report: return "report";
        case RunMode::Sweep: return "sweep";
        case RunMode::Critical: return "critical";
    }
    return "unknown";
}

const char* critical_label(CriticalKind kind) {
    switch (kind) {
        case CriticalKind::ResidualErgotropy: return "residual-ergotropy";
        case CriticalKind::MultiChargerAdvantage: return "multi-charger-advantage";
    }
    return "unknown";
}

namespace {

const std::vector<double> kCouplingGrid = {0.1, 1, 2, 3, 4, 5, 10, 20, 50, 100};

std::vector<double> linear_grid(double lo, double hi, int count) {
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    return g;
}

RunConfig trajectory_family(int n, int m, double R, std::string kind,
                            std::vector<double> weights, double t_max) {
    RunConfig cfg;
    cfg.mode = RunMode::Trajectory;
    cfg.model = ModelSpec::from_coupling_ratio(n, m, R);
    cfg.t_max = t_max;
    if (kind == "product") {
        cfg.scenario = ProductChargers{std::vector<double>(static_cast<std::size_t>(n), 1.0)};
        cfg.axis = SweepAxis::ChargerWeight;
    } else {
        cfg.scenario = ActiveBattery{0.0};
        cfg.axis = SweepAxis::BatteryWeight;
    }
    cfg.grid = std::move(weights);
    return cfg;
}

RunConfig sweep_over_R(int n, int m, ScenarioSpec scen) {
    RunConfig cfg;
    cfg.mode = RunMode::Sweep;
    cfg.model = ModelSpec::from_coupling_ratio(n, m, kCouplingGrid.back());
    cfg.scenario = std::move(scen);
    cfg.axis = SweepAxis::CouplingRatio;
    cfg.grid = kCouplingGrid;
    return cfg;
}

std::vector<double> all_ones(int n) {
    return std::vector<double>(static_cast<std::size_t>(n), 1.0);
}

} // namespace

RunConfig preset_config(const std::string& name) {
    // Trajectory families over the charger/battery weight.
    if (name == "fig2-left") return trajectory_family(1, 1, 20, "product", {0.4, 0.6, 0.8, 1.0}, 2.0);
    if (name == "fig2-right") {
        return trajectory_family(1, 1, 20, "active", {0.0, 0.3, 0.6, 0.9}, 2.0);
    }
    if (name == "fig3-a") return trajectory_family(1, 1, 0.1, "product", {0.4, 0.6, 0.8, 1.0}, 30.0);
    if (name == "fig3-b") return trajectory_family(1, 1, 0.1, "active", {0.0, 0.3, 0.6, 0.9}, 30.0);
    if (name == "fig3-c") return trajectory_family(2, 1, 0.1, "product", {0.4, 0.6, 0.8, 1.0}, 30.0);
    if (name == "fig3-d") return trajectory_family(2, 1, 0.1, "active", {0.0, 0.3, 0.6, 0.9}, 30.0);
    if (name == "fig7-left") {
        return trajectory_family(2, 1, 20, "product", {0.4, 0.6, 0.8, 1.0}, 2.0);
    }
    if (name == "fig7-right") {
        return trajectory_family(2, 1, 20, "active", {0.0, 0.3, 0.6, 0.9}, 2.0);
    }

    // Coupling-ratio sweeps.
    if (name == "fig4") return sweep_over_R(1, 1, ProductChargers{{1.0}});
    if (name == "fig4-ii") return sweep_over_R(1, 1, ActiveBattery{0.5});
    if (name == "fig8") return sweep_over_R(2, 1, ProductChargers{{1.0, 1.0}});
    if (name == "fig8-ii") return sweep_over_R(2, 1, ActiveBattery{0.5});
    if (name == "fig10-n1") return sweep_over_R(1, 1, ProductChargers{all_ones(1)});
    if (name == "fig10-n2") return sweep_over_R(2, 1, ProductChargers{all_ones(2)});
    if (name == "fig10-n3") return sweep_over_R(3, 1, ProductChargers{all_ones(3)});
    if (name == "fig10-ii-n1") return sweep_over_R(1, 1, ActiveBattery{0.5});
    if (name == "fig10-ii-n2") return sweep_over_R(2, 1, ActiveBattery{0.5});
    if (name == "fig10-ii-n3") return sweep_over_R(3, 1, ActiveBattery{0.5});

    // Weight sweeps at fixed coupling.
    if (name == "fig5") {
        RunConfig cfg;
        cfg.mode = RunMode::Sweep;
        cfg.model = ModelSpec::from_coupling_ratio(1, 1, 100);
        cfg.scenario = ProductChargers{{1.0}};
        cfg.axis = SweepAxis::ChargerWeight;
        cfg.grid = linear_grid(0.025, 1.0, 40);
        return cfg;
    }
    if (name == "fig6") {
        RunConfig cfg;
        cfg.mode = RunMode::Sweep;
        cfg.model = ModelSpec::from_coupling_ratio(1, 1, 100);
        cfg.scenario = ActiveBattery{0.0};
        cfg.axis = SweepAxis::BatteryWeight;
        cfg.grid = linear_grid(0.0, 0.975, 40);
        return cfg;
    }
    if (name == "fig9-product" || name == "fig9-bell") {
        RunConfig cfg;
        cfg.mode = RunMode::Sweep;
        cfg.model = ModelSpec::from_coupling_ratio(2, 1, 20);
        if (name == "fig9-bell") {
            cfg.scenario = BellChargers{BellKind::PsiPlus, 0.5};
        } else {
            cfg.scenario = ProductChargers{{0.5, 0.5}};
        }
        cfg.axis = SweepAxis::ChargerWeight;
        cfg.grid = linear_grid(0.05, 0.95, 19);
        return cfg;
    }
    if (name.rfind("fig12-m", 0) == 0 && name.size() == 8) {
        const int m = name[7] - '0';
        if (m >= 1 && m <= 4) {
            RunConfig cfg;
            cfg.mode = RunMode::Sweep;
            cfg.model = ModelSpec::from_coupling_ratio(1, m, 20);
            cfg.scenario = ProductChargers{{0.8}};
            cfg.axis = SweepAxis::ChargerWeight;
            cfg.grid = linear_grid(0.05, 1.0, 20);
            return cfg;
        }
    }

    // Critical-parameter presets.
    if (name == "crit-e1-R2" || name == "crit-e1-R20" || name == "crit-e1-R100") {
        RunConfig cfg;
        cfg.mode = RunMode::Critical;
        cfg.critical = CriticalKind::ResidualErgotropy;
        if (name == "crit-e1-R2") {
            cfg.model = ModelSpec::from_coupling_ratio(1, 1, 2);
            cfg.bracket = std::make_pair(0.005, 0.2);
        } else if (name == "crit-e1-R20") {
            cfg.model = ModelSpec::from_coupling_ratio(1, 1, 20);
            cfg.bracket = std::make_pair(0.5, 0.9);
        } else {
            cfg.model = ModelSpec::from_coupling_ratio(1, 1, 100);
            cfg.bracket = std::make_pair(0.8, 0.99);
        }
        cfg.scenario = ActiveBattery{0.0};
        return cfg;
    }
    if (name == "crit-n2-crossover") {
        RunConfig cfg;
        cfg.mode = RunMode::Critical;
        cfg.critical = CriticalKind::MultiChargerAdvantage;
        cfg.model = ModelSpec::from_coupling_ratio(1, 1, 10);
        cfg.scenario = ProductChargers{{1.0}};
        cfg.bracket = std::make_pair(8.0, 13.0);
        return cfg;
    }

    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"fig2-left",   "fig2-right", "fig3-a",      "fig3-b",      "fig3-c",
            "fig3-d",      "fig4",       "fig4-ii",     "fig5",        "fig6",
            "fig7-left",   "fig7-right", "fig8",        "fig8-ii",     "fig9-product",
            "fig9-bell",   "fig10-n1",   "fig10-n2",    "fig10-n3",    "fig10-ii-n1",
            "fig10-ii-n2", "fig10-ii-n3", "fig12-m1",   "fig12-m2",    "fig12-m3",
            "fig12-m4",    "crit-e1-R2", "crit-e1-R20", "crit-e1-R100", "crit-n2-crossover"};
}

} // namespace qbat
