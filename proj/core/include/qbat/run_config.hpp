// run_config.hpp — Validated run description: model + scenario + integrator
// + execution mode, parsed from an INI-style config file and/or flag
// overrides, with named presets for the standard parameter bundles.

#pragma once

#include "qbat/analysis.hpp"
#include "qbat/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbat {

enum class RunMode { Trajectory, Report, Sweep, Critical };

enum class CriticalKind {
    // Largest battery weight e1 for which the charged ergotropy still
    // exceeds the initial ergotropy e1 (bisection over e1).
    ResidualErgotropy,
    // Largest coupling ratio R at which two fully excited chargers beat a
    // single one (bisection over R).
    MultiChargerAdvantage,
};

struct RunConfig {
    RunMode mode = RunMode::Report;
    ModelSpec model = ModelSpec::from_coupling_ratio(1, 1, 20.0);
    ScenarioSpec scenario = ProductChargers{{1.0}};

    std::optional<double> dt;         // lambda units; default 0.002/max(1,R)
    std::optional<double> t_max;      // lambda units; default from horizon
    std::optional<int> record_stride; // default thins to ~4000 records

    std::optional<SweepAxis> axis;
    std::vector<double> grid;

    std::optional<CriticalKind> critical;
    std::optional<std::pair<double, double>> bracket;
    double bisect_tol = 1e-3;

    std::string out;
    int threads = 0; // 0: QBAT_THREADS env or hardware concurrency

    void validate() const;
    IntegratorConfig integrator_for(const ModelSpec& spec) const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Strict INI parser: [run]/[model]/[scenario]/[integrator]/[sweep]/[critical]
// sections, '#' or ';' comments. Unknown sections or keys are rejected with
// the offending name; so are out-of-range values.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Round-trips through parse_config_text.
std::string emit_config(const RunConfig& cfg);

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

const char* mode_label(RunMode mode);
const char* critical_label(CriticalKind kind);

} // namespace qbat
