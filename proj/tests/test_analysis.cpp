#include "doctest.h"

#include "qbat/analysis.hpp"
#include "qbat/closed_form.hpp"
#include "qbat/errors.hpp"

#include <cmath>
#include <cstdlib>

using namespace qbat;

namespace {

// Synthetic trajectory carrying a chosen ergotropy record.
Trajectory synthetic(const std::vector<double>& times, const std::vector<double>& erg) {
    Trajectory traj;
    traj.model = ModelSpec::from_coupling_ratio(1, 1, 1.0);
    traj.scenario = ProductChargers{{1.0}};
    traj.times = times;
    for (double e : erg) {
        ErgotropyBreakdown b;
        b.total = e;
        b.incoherent = e;
        b.mean_energy = e;
        traj.battery.push_back(b);
        traj.charger.push_back(ErgotropyBreakdown{});
        traj.battery_states.emplace_back();
        traj.charger_states.emplace_back();
        traj.pseudomode_occupation.push_back(0.0);
    }
    return traj;
}

ChargingReport report_for(int n, int m, double r, const ScenarioSpec& scen,
                          double t_max = -1.0) {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(n, m, r);
    const double horizon = t_max > 0.0 ? t_max : default_horizon(spec);
    const Trajectory traj = evolve(spec, scen, IntegratorConfig::defaults(spec, horizon));
    return charging_report(traj);
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("peak detection selects the larger of two interior maxima") {
    std::vector<double> times;
    std::vector<double> erg;
    // two humps, the second one taller
    for (int i = 0; i <= 400; ++i) {
        const double t = i * 0.01;
        times.push_back(t);
        const double hump1 = std::exp(-std::pow((t - 1.0) / 0.3, 2));
        const double hump2 = 1.3 * std::exp(-std::pow((t - 3.0) / 0.3, 2));
        erg.push_back(hump1 + hump2);
    }
    const ChargingReport report = charging_report(synthetic(times, erg));
    REQUIRE(report.local_maxima.size() == 2);
    CHECK(report.which_maximum == 2);
    CHECK(std::abs(report.t_bar - 3.0) < 1e-3);
    CHECK(report.ergotropy_at_tbar == doctest::Approx(1.3).epsilon(1e-4));
    CHECK(!report.no_interior_maximum);
    double best = 0.0;
    for (const auto& [t, y] : report.local_maxima) best = std::max(best, y);
    CHECK(report.ergotropy_at_tbar == best);
}

TEST_CASE("quadratic refinement recovers an off-grid peak position") {
    std::vector<double> times;
    std::vector<double> erg;
    for (int i = 0; i <= 100; ++i) {
        const double t = i * 0.1;
        times.push_back(t);
        erg.push_back(4.0 - std::pow(t - 5.037, 2)); // vertex between samples
    }
    const ChargingReport report = charging_report(synthetic(times, erg));
    CHECK(std::abs(report.t_bar - 5.037) < 1e-9); // exact for a parabola
    CHECK(std::abs(report.ergotropy_at_tbar - 4.0) < 1e-9);
}

TEST_CASE("a monotone record reports the endpoint with an explicit flag") {
    std::vector<double> times;
    std::vector<double> erg;
    for (int i = 0; i <= 50; ++i) {
        times.push_back(i * 0.1);
        erg.push_back(1.0 - std::exp(-i * 0.1));
    }
    const ChargingReport report = charging_report(synthetic(times, erg));
    CHECK(report.no_interior_maximum);
    CHECK(report.which_maximum == 0);
    CHECK(report.t_bar == times.back());
    CHECK(report.ergotropy_at_tbar == erg.back());
}

TEST_CASE("negligible revival ripples do not shift the maximum index") {
    std::vector<double> times;
    std::vector<double> erg;
    for (int i = 0; i <= 600; ++i) {
        const double t = i * 0.01;
        times.push_back(t);
        const double hump1 = std::exp(-std::pow((t - 1.0) / 0.3, 2));
        const double ripple = 1e-3 * std::exp(-std::pow((t - 2.5) / 0.2, 2));
        const double hump2 = 1.2 * std::exp(-std::pow((t - 4.5) / 0.3, 2));
        erg.push_back(hump1 + ripple + hump2);
    }
    const ChargingReport report = charging_report(synthetic(times, erg));
    CHECK(report.local_maxima.size() == 2);
    CHECK(report.which_maximum == 2);
}

TEST_CASE("measured charging time tracks the closed form across weights and couplings") {
    for (double r : {5.0, 20.0, 100.0}) {
        const auto reference =
            std::get<FiniteChargingTime>(charging_time(SingleChargerParams{1.0, 1, 1.0, r}));
        std::vector<double> measured;
        for (double c1 : {0.2, 0.5, 0.8, 1.0}) {
            const ChargingReport report = report_for(1, 1, r, ProductChargers{{c1}});
            CHECK(std::abs(report.t_bar - reference.t_bar) / reference.t_bar < 0.01);
            measured.push_back(report.t_bar);
        }
        // the charging time does not care about the charger weight
        for (double a : measured) {
            for (double b : measured) CHECK(std::abs(a - b) / a < 0.01);
        }
    }
}

TEST_CASE("two excited chargers on a two-cell battery peak on the second maximum") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(2, 2, 40.0);
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_max = 0.3;
    cfg.record_stride = 2;
    const Trajectory traj = evolve(spec, ProductChargers{{1.0, 1.0}}, cfg);
    const ChargingReport report = charging_report(traj);
    CHECK(report.which_maximum == 2);
    CHECK(report.local_maxima.size() >= 2);
    CHECK(report.ergotropy_at_tbar > report.local_maxima[0].second);
}

TEST_CASE("two-charger conversion efficiency saturates well below one") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(2, 1, 100.0);
    const Trajectory traj = evolve(spec, ActiveBattery{0.5},
                                   IntegratorConfig::defaults(spec, default_horizon(spec)));
    const auto p = efficiency_output(traj, charging_report(traj));
    REQUIRE(p.has_value());
    CHECK(*p > 0.0);
    CHECK(*p < 0.9);
}

TEST_CASE("fully discharged transient precedes the selected maximum (active battery)") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 20.0);
    const Trajectory traj =
        evolve(spec, ActiveBattery{0.5}, IntegratorConfig::defaults(spec, default_horizon(spec)));
    const ChargingReport report = charging_report(traj);
    double dip = 1e9;
    for (std::size_t i = 0; i < report.sample_index; ++i) {
        dip = std::min(dip, traj.battery[i].total);
    }
    CHECK(dip <= 1e-4);
    CHECK(report.ergotropy_at_tbar > 0.5); // recharges above its residual work
}

TEST_CASE("efficiencies are defined and ordered at strong coupling") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 20.0);
    const Trajectory traj = evolve(spec, ProductChargers{{1.0}},
                                   IntegratorConfig::defaults(spec, default_horizon(spec)));
    const ChargingReport report = charging_report(traj);
    const auto p = efficiency_output(traj, report);
    const auto pcal = efficiency_input(traj, report);
    REQUIRE(p.has_value());
    REQUIRE(pcal.has_value());
    CHECK(*p > 0.0);
    CHECK(*p <= 1.0);
    CHECK(*pcal > 0.0);
    CHECK(*pcal <= 1.0);
}

TEST_CASE("conversion efficiency approaches one at very strong coupling") {
    double previous = 0.0;
    for (double r : {5.0, 20.0, 100.0}) {
        const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, r);
        const Trajectory traj = evolve(spec, ProductChargers{{1.0}},
                                       IntegratorConfig::defaults(spec, default_horizon(spec)));
        const auto p = efficiency_output(traj, charging_report(traj));
        REQUIRE(p.has_value());
        CHECK(*p > previous);
        previous = *p;
    }
    CHECK(previous > 0.9);
}

TEST_CASE("decoupled run yields undefined efficiencies") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 0.0);
    const Trajectory traj =
        evolve(spec, ProductChargers{{1.0}}, IntegratorConfig::defaults(spec, 1.0));
    const ChargingReport report = charging_report(traj);
    CHECK(!efficiency_output(traj, report).has_value());
    CHECK(!efficiency_input(traj, report).has_value());
}

TEST_CASE("charged work grows monotonically with the coupling ratio") {
    // non-strict at the weak end: a fully excited charger charges nothing
    // at all until the transferred weight can exceed one half
    const SweepResult result =
        sweep(SweepAxis::CouplingRatio, {0.1, 1.0, 2.0, 5.0, 20.0},
              ModelSpec::from_coupling_ratio(1, 1, 1.0), ProductChargers{{1.0}});
    double previous = -1.0;
    for (const SweepPoint& point : result.points) {
        REQUIRE(point.error.empty());
        REQUIRE(point.report.has_value());
        CHECK(point.report->ergotropy_at_tbar >= previous);
        previous = point.report->ergotropy_at_tbar;
    }
    CHECK(result.points.front().report->ergotropy_at_tbar == 0.0);
    CHECK(result.points.back().report->ergotropy_at_tbar > 0.8);
}

TEST_CASE("charged work is nearly linear in the charger weight at R=100") {
    const SweepResult result =
        sweep(SweepAxis::ChargerWeight, {0.25, 0.5, 0.75, 1.0},
              ModelSpec::from_coupling_ratio(1, 1, 100.0), ProductChargers{{1.0}});
    std::vector<double> ratio;
    for (const SweepPoint& point : result.points) {
        REQUIRE(point.report.has_value());
        ratio.push_back(point.report->ergotropy_at_tbar / point.axis_value);
    }
    for (double r : ratio) {
        CHECK(std::abs(r - ratio.back()) / ratio.back() < 0.1);
    }
}

TEST_CASE("residual work hurts: charged work dips near e1 = 0.56 at R=100") {
    std::vector<double> grid;
    for (double e1 = 0.40; e1 <= 0.701; e1 += 0.05) grid.push_back(e1);
    const SweepResult result =
        sweep(SweepAxis::BatteryWeight, grid, ModelSpec::from_coupling_ratio(1, 1, 100.0),
              ActiveBattery{0.0});
    std::size_t best = 0;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        REQUIRE(result.points[i].report.has_value());
        if (result.points[i].report->ergotropy_at_tbar <
            result.points[best].report->ergotropy_at_tbar) {
            best = i;
        }
    }
    CHECK(best > 0);
    CHECK(best + 1 < result.points.size());
    CHECK(std::abs(result.grid[best] - 0.5636) < 0.055);
}

TEST_CASE("entangled chargers win at low weight, product chargers at high weight") {
    auto charged = [](const ScenarioSpec& scen, double c1) {
        ScenarioSpec s = apply_axis(SweepAxis::ChargerWeight, scen, c1);
        return report_for(2, 1, 20.0, s).ergotropy_at_tbar;
    };
    const ScenarioSpec product = ProductChargers{{0.5, 0.5}};
    const ScenarioSpec bell = BellChargers{BellKind::PsiPlus, 0.5};
    CHECK(charged(bell, 0.2) > charged(product, 0.2));
    CHECK(charged(bell, 0.9) < charged(product, 0.9));
}

TEST_CASE("sweeps reject non-increasing grids and contain per-point failures") {
    const ModelSpec base = ModelSpec::from_coupling_ratio(1, 1, 1.0);
    CHECK_THROWS_AS(sweep(SweepAxis::CouplingRatio, {1.0, 1.0}, base, ProductChargers{{1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(sweep(SweepAxis::CouplingRatio, {}, base, ProductChargers{{1.0}}),
                    ValidationError);

    // a pinned dt valid at R=1 but unstable at R=100 fails only that point
    IntegratorConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_max = 0.5;
    const SweepResult result = sweep(SweepAxis::CouplingRatio, {1.0, 100.0}, base,
                                     ProductChargers{{1.0}}, cfg);
    CHECK(result.points[0].error.empty());
    CHECK(!result.points[1].error.empty());
    CHECK(!result.points[1].report.has_value());
}

TEST_CASE("sweep results do not depend on the thread count") {
    const std::vector<double> grid = {1.0, 3.0, 10.0};
    const ModelSpec base = ModelSpec::from_coupling_ratio(1, 1, 1.0);
    const SweepResult serial =
        sweep(SweepAxis::CouplingRatio, grid, base, ProductChargers{{0.8}}, std::nullopt, 1);
    const SweepResult parallel =
        sweep(SweepAxis::CouplingRatio, grid, base, ProductChargers{{0.8}}, std::nullopt, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(serial.points[i].report->ergotropy_at_tbar ==
              parallel.points[i].report->ergotropy_at_tbar);
        CHECK(serial.points[i].report->t_bar == parallel.points[i].report->t_bar);
    }
}

TEST_CASE("bisection finds a synthetic threshold to the requested tolerance") {
    int calls = 0;
    const double found = critical_parameter(
        [&](double x) {
            ++calls;
            return x < 0.37;
        },
        0.0, 1.0, 1e-3);
    CHECK(std::abs(found - 0.37) <= 1e-3);
    CHECK(calls < 20);
    CHECK_THROWS_AS(critical_parameter([](double) { return true; }, 0.0, 1.0, 1e-3),
                    NumericsError);
}

TEST_CASE("thread count falls back from the environment variable") {
    setenv("QBAT_THREADS", "3", 1);
    CHECK(sweep_thread_count(0) == 3);
    CHECK(sweep_thread_count(5) == 5);
    unsetenv("QBAT_THREADS");
    CHECK(sweep_thread_count(0) >= 1);
}

} // TEST_SUITE
