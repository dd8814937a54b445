#include "qbat/analysis.hpp"

#include "qbat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <thread>

namespace qbat {

namespace {

// Vertex of the parabola through three equally spaced samples. Returns the
// middle point unchanged when the samples are (numerically) collinear.
std::pair<double, double> refine_peak(double t0, double t1, double t2, double y0, double y1,
                                      double y2) {
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-300) return {t1, y1};
    const double h = 0.5 * (t2 - t0);
    const double delta = 0.5 * (y0 - y2) / denom;
    const double t_peak = t1 + delta * h;
    const double y_peak = y1 - 0.25 * (y0 - y2) * delta;
    if (t_peak < t0 || t_peak > t2) return {t1, y1}; // degenerate spacing
    return {t_peak, y_peak};
}

double quadratic_at(double t, double t0, double t1, double t2, double y0, double y1, double y2) {
    const double l0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
    const double l1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
    const double l2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
    return y0 * l0 + y1 * l1 + y2 * l2;
}

std::size_t nearest_sample(const std::vector<double>& times, double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    if (it == times.end()) return times.size() - 1;
    const auto hi = static_cast<std::size_t>(it - times.begin());
    return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
}

} // namespace

ChargingReport charging_report(const Trajectory& traj) {
    if (traj.size() < 3) {
        throw ValidationError("charging_report: trajectory has fewer than 3 samples");
    }

    ChargingReport report;
    std::vector<std::size_t> peak_samples;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double prev = traj.battery[i - 1].total;
        const double here = traj.battery[i].total;
        const double next = traj.battery[i + 1].total;
        if (here > prev && here > next) {
            const auto [tp, yp] = refine_peak(traj.times[i - 1], traj.times[i], traj.times[i + 1],
                                              prev, here, next);
            report.local_maxima.emplace_back(tp, yp);
            peak_samples.push_back(i);
        }
    }

    // Keep only principal peaks: revival ripples below 1% of the dominant
    // maximum would otherwise shift the maximum index.
    if (!report.local_maxima.empty()) {
        double dominant = 0.0;
        for (const auto& [t, y] : report.local_maxima) dominant = std::max(dominant, y);
        const double floor = 0.01 * dominant;
        std::vector<std::pair<double, double>> kept;
        std::vector<std::size_t> kept_samples;
        for (std::size_t k = 0; k < report.local_maxima.size(); ++k) {
            if (report.local_maxima[k].second >= floor) {
                kept.push_back(report.local_maxima[k]);
                kept_samples.push_back(peak_samples[k]);
            }
        }
        report.local_maxima = std::move(kept);
        peak_samples = std::move(kept_samples);
    }

    if (report.local_maxima.empty()) {
        const std::size_t last = traj.size() - 1;
        report.no_interior_maximum = true;
        report.which_maximum = 0;
        report.t_bar = traj.times[last];
        report.ergotropy_at_tbar = traj.battery[last].total;
        report.breakdown_at_tbar = traj.battery[last];
        report.sample_index = last;
        return report;
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < report.local_maxima.size(); ++k) {
        if (report.local_maxima[k].second > report.local_maxima[best].second) best = k;
    }
    const std::size_t i = peak_samples[best];
    report.which_maximum = static_cast<int>(best) + 1;
    report.t_bar = report.local_maxima[best].first;
    report.ergotropy_at_tbar = report.local_maxima[best].second;
    report.sample_index = nearest_sample(traj.times, report.t_bar);

    // Interpolate the remaining record components through the same bracket.
    const double t0 = traj.times[i - 1];
    const double t1 = traj.times[i];
    const double t2 = traj.times[i + 1];
    auto interp = [&](auto getter) {
        return quadratic_at(report.t_bar, t0, t1, t2, getter(traj.battery[i - 1]),
                            getter(traj.battery[i]), getter(traj.battery[i + 1]));
    };
    report.breakdown_at_tbar.total = report.ergotropy_at_tbar;
    report.breakdown_at_tbar.incoherent =
        interp([](const ErgotropyBreakdown& b) { return b.incoherent; });
    report.breakdown_at_tbar.coherent =
        interp([](const ErgotropyBreakdown& b) { return b.coherent; });
    report.breakdown_at_tbar.mean_energy =
        interp([](const ErgotropyBreakdown& b) { return b.mean_energy; });
    return report;
}

namespace {

std::optional<double> efficiency(const Trajectory& traj, const ChargingReport& report,
                                 bool charger_side) {
    const double charged = std::max(0.0, report.ergotropy_at_tbar - traj.battery[0].total);
    const std::size_t s = std::min(report.sample_index, traj.size() - 1);
    double denom = 0.0;
    if (charger_side) {
        denom = traj.charger[0].mean_energy - traj.charger[s].mean_energy;
    } else {
        denom = traj.battery[s].mean_energy - traj.battery[0].mean_energy;
    }
    if (!(denom > 0.0)) return std::nullopt;
    return charged / denom;
}

} // namespace

std::optional<double> efficiency_output(const Trajectory& traj, const ChargingReport& report) {
    return efficiency(traj, report, true);
}

std::optional<double> efficiency_input(const Trajectory& traj, const ChargingReport& report) {
    return efficiency(traj, report, false);
}

double default_horizon(const ModelSpec& spec) {
    // Collective single-excitation rate for n+m qubits; for one charger this
    // is the exact oscillation rate of the closed-form solution. Registers
    // with more than two qubits revive on a slower clock (incommensurate
    // multi-excitation frequencies), so the window stretches with the
    // register size.
    const double r = spec.coupling_ratio();
    const int nq = spec.num_qubits();
    const double disc = 1.0 - 2.0 * static_cast<double>(nq) * r * r;
    if (disc < 0.0) {
        const double abs_zeta = std::sqrt(-disc); // in lambda units
        const double stretch = nq <= 2 ? 1.0 : static_cast<double>(nq - 1);
        return 3.0 * stretch * 2.0 * std::numbers::pi / abs_zeta;
    }
    return 30.0;
}

std::string axis_label(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::CouplingRatio: return "R";
        case SweepAxis::ChargerWeight: return "c1";
        case SweepAxis::BatteryWeight: return "e1";
    }
    return "axis";
}

ModelSpec apply_axis(SweepAxis axis, const ModelSpec& base, double value) {
    ModelSpec spec = base;
    if (axis == SweepAxis::CouplingRatio) {
        if (!(value >= 0.0)) throw ValidationError("R grid value must be nonnegative");
        spec.Omega = value * base.lambda / std::sqrt(2.0);
    }
    return spec;
}

ScenarioSpec apply_axis(SweepAxis axis, const ScenarioSpec& base, double value) {
    ScenarioSpec scen = base;
    if (axis == SweepAxis::ChargerWeight) {
        if (std::holds_alternative<ProductChargers>(scen)) {
            auto& s = std::get<ProductChargers>(scen);
            std::fill(s.c.begin(), s.c.end(), value);
        } else if (std::holds_alternative<BellChargers>(scen)) {
            std::get<BellChargers>(scen).c1 = value;
        } else if (std::holds_alternative<MixedCharger>(scen)) {
            std::get<MixedCharger>(scen).c1 = value;
        } else {
            throw ValidationError("c1 sweep requires a charger-parameterized scenario");
        }
    } else if (axis == SweepAxis::BatteryWeight) {
        if (std::holds_alternative<ActiveBattery>(scen)) {
            std::get<ActiveBattery>(scen).e1 = value;
        } else if (std::holds_alternative<MixedBattery>(scen)) {
            std::get<MixedBattery>(scen).e1 = value;
        } else {
            throw ValidationError("e1 sweep requires a battery-parameterized scenario");
        }
    }
    return scen;
}

int sweep_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QBAT_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, const ModelSpec& base_model,
                  const ScenarioSpec& base_scenario, const std::optional<IntegratorConfig>& cfg,
                  int threads) {
    if (grid.empty()) throw ValidationError("sweep: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("sweep: grid must be strictly increasing");
        }
    }

    SweepResult result;
    result.axis = axis;
    result.grid = grid;
    result.base_model = base_model;
    result.base_scenario = base_scenario;
    result.integrator = cfg;
    result.points.resize(grid.size());

    auto run_point = [&](std::size_t idx) {
        SweepPoint point;
        point.axis_value = grid[idx];
        try {
            const ModelSpec model = apply_axis(axis, base_model, grid[idx]);
            const ScenarioSpec scen = apply_axis(axis, base_scenario, grid[idx]);
            const IntegratorConfig icfg =
                cfg ? *cfg : IntegratorConfig::defaults(model, default_horizon(model));
            const Trajectory traj = evolve(model, scen, icfg);
            const ChargingReport report = charging_report(traj);
            point.p_eff = efficiency_output(traj, report);
            point.pcal_eff = efficiency_input(traj, report);
            if (report.no_interior_maximum) point.flags.push_back("no_interior_maximum");
            if (!point.p_eff) point.flags.push_back("undefined_P");
            if (!point.pcal_eff) point.flags.push_back("undefined_Pcal");
            point.report = report;
        } catch (const Error& e) {
            point.error = e.what();
            point.flags.push_back("error");
        }
        return point;
    };

    const int nthreads = sweep_thread_count(threads);
    if (nthreads <= 1 || grid.size() <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) result.points[i] = run_point(i);
        return result;
    }

    // Batches of independent futures; results land at their grid index, so
    // output order never depends on scheduling.
    std::size_t next = 0;
    while (next < grid.size()) {
        const std::size_t batch =
            std::min(static_cast<std::size_t>(nthreads), grid.size() - next);
        std::vector<std::future<SweepPoint>> futures;
        futures.reserve(batch);
        for (std::size_t k = 0; k < batch; ++k) {
            futures.push_back(std::async(std::launch::async, run_point, next + k));
        }
        for (std::size_t k = 0; k < batch; ++k) {
            result.points[next + k] = futures[k].get();
        }
        next += batch;
    }
    return result;
}

double critical_parameter(const std::function<bool(double)>& predicate, double lo, double hi,
                          double tol) {
    if (!(hi > lo)) throw ValidationError("critical_parameter: bracket must satisfy lo < hi");
    if (!(tol > 0.0)) throw ValidationError("critical_parameter: tolerance must be positive");
    bool at_lo = predicate(lo);
    const bool at_hi = predicate(hi);
    if (at_lo == at_hi) {
        throw NumericsError("critical_parameter: predicate does not change over the bracket");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (predicate(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qbat
