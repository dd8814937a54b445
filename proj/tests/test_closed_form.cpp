// Closed-form single-charger solution. The frozen constants below were
// evaluated independently with 30-digit arithmetic from the defining
// expressions (p, nu2, the battery/cell work formulas, and t_bar).

#include "doctest.h"

#include "qbat/closed_form.hpp"
#include "qbat/ergotropy.hpp"
#include "qbat/errors.hpp"
#include "qbat/model.hpp"

#include <cmath>
#include <numbers>

using namespace qbat;

namespace {

// lambda * t_bar in the strong-coupling regime
constexpr double kTbarM1R100 = 0.031416319242342892;
constexpr double kTbarM1R20 = 0.15712874308640460;
constexpr double kTbarM1R10 = 0.31455270228880017;
constexpr double kTbarM2R20 = 0.12828171115714891;
constexpr double kTbarM3R20 = 0.11108943253407671;
constexpr double kTbarM4R20 = 0.099358303222197576;

// peak transfer at R=10, m=1: p, |nu2|^2, and the resulting charged work
constexpr double kPAtTbarR10 = -0.85446789300675647;
constexpr double kNu2SqR10 = 0.85976279154822969;
constexpr double kChargedR10C1 = 0.71952558309645939;

// charged work at the R=20 peak for three charger weights (m=1)
constexpr double kChargedR20C02 = 0.18242098043667463;
constexpr double kChargedR20C08 = 0.69464917775557019;
constexpr double kChargedR20C10 = 0.85173956455372471;

// time at which |nu2|^2 crosses 1/2 for m=1, R=20 (p = 1 - sqrt(2))
constexpr double kWindowR20 = 0.10236999982099497;

// joint vs per-cell work at the peak, c1=0.8, R=20
constexpr double kJointM2 = 0.56963716716274525;
constexpr double kCellsM2 = 0.28204863566861387;
constexpr double kJointM3 = 0.41186653259823714;
constexpr double kCellsM3 = 0.16774653979198294;

SingleChargerParams params_for(double c1, int m, double r) {
    return SingleChargerParams{c1, m, 1.0, r};
}

} // namespace

TEST_SUITE("closed_form") {

TEST_CASE("p starts at one") {
    for (double r : {0.0, 0.1, 0.5000001, 2.0, 20.0}) {
        CHECK(p_coefficient(params_for(1.0, 1, r), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("decoupled limit: p stays one forever") {
    const SingleChargerParams params = params_for(0.7, 2, 0.0);
    for (double t : {0.1, 1.0, 7.0, 30.0}) {
        CHECK(p_coefficient(params, t) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nu_coefficients(params, t).nu2 == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("p crosses 1 - sqrt(2) at the frozen window time (m=1, R=20)") {
    const double p = p_coefficient(params_for(1.0, 1, 20.0), kWindowR20);
    CHECK(std::abs(p - (1.0 - std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("degenerate boundary uses the analytic limit of p") {
    // 2(m+1)R^2 = 1 exactly at m=1, R=0.5
    const SingleChargerParams params = params_for(1.0, 1, 0.5);
    CHECK(std::abs(params.discriminant()) < 1e-15);
    for (double t : {0.0, 0.5, 2.0}) {
        CHECK(p_coefficient(params, t) ==
              doctest::Approx(std::exp(-0.5 * t) * (1.0 + 0.5 * t)).epsilon(1e-12));
    }
}

TEST_CASE("transfer coefficients start at (1, 0) and obey nu1 + m nu2 = p") {
    for (int m : {1, 2, 3}) {
        const SingleChargerParams params = params_for(0.6, m, 7.0);
        const auto [nu1_0, nu2_0] = nu_coefficients(params, 0.0);
        CHECK(nu1_0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(nu2_0 == doctest::Approx(0.0).epsilon(1e-14));
        for (double t : {0.05, 0.2, 0.8, 3.0}) {
            const double p = p_coefficient(params, t);
            const auto [nu1, nu2] = nu_coefficients(params, t);
            CHECK(std::abs(nu1 + m * nu2 - p) < 1e-13);
        }
    }
}

TEST_CASE("weak coupling saturates nu2 at -1/(m+1)") {
    // the overdamped branch relaxes at rate (lambda - zeta)/2, so the limit
    // needs a long horizon; this also exercises overflow safety at large t
    for (int m : {1, 2}) {
        const SingleChargerParams params = params_for(1.0, m, 0.1);
        const double nu2 = nu_coefficients(params, 3000.0).nu2;
        CHECK(std::abs(nu2 + 1.0 / (m + 1)) < 1e-10);
        CHECK(std::isfinite(p_coefficient(params, 1e6)));
    }
}

TEST_CASE("battery state starts in the ground state and stays physical") {
    for (int m : {1, 2, 3}) {
        const SingleChargerParams params = params_for(0.8, m, 20.0);
        const Matrix rho0 = battery_state(params, 0.0);
        CHECK(rho0(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
        for (double t : {0.05, 0.1, 0.2}) {
            const Matrix rho = battery_state(params, t);
            CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
            CHECK(eig_hermitian(rho).values.minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("fully excited charger leaves the single cell diagonal") {
    const SingleChargerParams params = params_for(1.0, 1, 10.0);
    const double t = kTbarM1R10;
    const Matrix rho = battery_state(params, t);
    CHECK(std::abs(rho(0, 1)) < 1e-14);
    CHECK(rho(1, 1).real() == doctest::Approx(kNu2SqR10).epsilon(1e-10));
    CHECK(p_coefficient(params, t) == doctest::Approx(kPAtTbarR10).epsilon(1e-10));
}

TEST_CASE("battery work formula agrees with the generic evaluator on a grid") {
    for (int m : {1, 2, 3}) {
        const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 20.0);
        const ErgotropyEvaluator eval(battery_hamiltonian(spec));
        for (double c1 : {0.3, 0.8}) {
            const SingleChargerParams params = params_for(c1, m, 20.0);
            for (double t : {0.03, 0.08, 0.15, 0.3}) {
                const double generic = eval.ergotropy(battery_state(params, t));
                const double formula = battery_ergotropy(params, t);
                CHECK(std::abs(generic - formula) < 1e-10);
            }
        }
    }
}

TEST_CASE("work scales with omega0 while the formula stays dimensionless") {
    ModelSpec spec = ModelSpec::from_coupling_ratio(1, 2, 20.0);
    spec.omega0 = 2.5;
    const ErgotropyEvaluator eval(battery_hamiltonian(spec));
    const SingleChargerParams params = params_for(0.7, 2, 20.0);
    const double raw = eval.ergotropy(battery_state(params, 0.1));
    CHECK(raw == doctest::Approx(2.5 * battery_ergotropy(params, 0.1)).epsilon(1e-12));
}

TEST_CASE("zero transfer means zero work") {
    const SingleChargerParams params = params_for(0.9, 2, 5.0);
    CHECK(battery_ergotropy(params, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cell_ergotropy(params, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("charged work at the R=10 peak matches the frozen value") {
    const SingleChargerParams params = params_for(1.0, 1, 10.0);
    const auto time = std::get<FiniteChargingTime>(charging_time(params));
    CHECK(time.t_bar == doctest::Approx(kTbarM1R10).epsilon(1e-12));
    CHECK(time.battery_ergotropy_at_t_bar == doctest::Approx(kChargedR10C1).epsilon(1e-10));
}

TEST_CASE("charged work at the R=20 peak for three charger weights") {
    struct Case {
        double c1;
        double expected;
    };
    for (const auto& [c1, expected] : {Case{0.2, kChargedR20C02}, Case{0.8, kChargedR20C08},
                                       Case{1.0, kChargedR20C10}}) {
        const SingleChargerParams params = params_for(c1, 1, 20.0);
        const auto time = std::get<FiniteChargingTime>(charging_time(params));
        CHECK(time.battery_ergotropy_at_t_bar == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("single cell and whole battery coincide for m=1") {
    const SingleChargerParams params = params_for(0.65, 1, 8.0);
    for (double t : {0.1, 0.3, 0.5}) {
        CHECK(battery_ergotropy(params, t) == cell_ergotropy(params, t));
    }
}

TEST_CASE("charging time values and their scaling with the cell count") {
    struct Case {
        int m;
        double r;
        double expected;
    };
    for (const auto& [m, r, expected] :
         {Case{1, 100.0, kTbarM1R100}, Case{1, 20.0, kTbarM1R20}, Case{2, 20.0, kTbarM2R20},
          Case{3, 20.0, kTbarM3R20}, Case{4, 20.0, kTbarM4R20}}) {
        const auto time = std::get<FiniteChargingTime>(charging_time(params_for(1.0, m, r)));
        CHECK(time.t_bar == doctest::Approx(expected).epsilon(1e-12));
    }
    // ln(lambda t_bar) + ln(m+1)/2 approaches ln(sqrt(2) pi / R), tighter as
    // R grows; at R=20 the residual is already inside 0.5%
    double prev_residual = 1.0;
    for (double r : {5.0, 20.0, 100.0}) {
        double worst = 0.0;
        for (int m = 1; m <= 4; ++m) {
            const auto time = std::get<FiniteChargingTime>(charging_time(params_for(1.0, m, r)));
            const double lhs = std::log(time.t_bar) + 0.5 * std::log(m + 1.0);
            const double rhs = std::log(std::sqrt(2.0) * std::numbers::pi / r);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        if (r >= 20.0) CHECK(worst < 0.005);
        CHECK(worst < prev_residual);
        prev_residual = worst;
    }
}

TEST_CASE("charging time ignores the charger weight") {
    const auto a = std::get<FiniteChargingTime>(charging_time(params_for(0.2, 2, 15.0)));
    const auto b = std::get<FiniteChargingTime>(charging_time(params_for(0.9, 2, 15.0)));
    CHECK(a.t_bar == b.t_bar);
}

TEST_CASE("weak regime reports an unbounded charging time with limit values") {
    const SingleChargerParams params = params_for(1.0, 1, 0.1);
    const auto time = charging_time(params);
    REQUIRE(std::holds_alternative<UnboundedChargingTime>(time));
    const auto& u = std::get<UnboundedChargingTime>(time);
    CHECK(u.limiting_nu2 == doctest::Approx(-0.5).epsilon(1e-14));
    // a fully excited single charger cannot charge one cell through a weak
    // link: |nu2|^2 saturates at 1/4 and the work stays zero
    CHECK(u.limiting_battery_ergotropy == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("degenerate boundary is rejected for the charging time") {
    CHECK_THROWS_AS(charging_time(params_for(1.0, 1, 0.5)), ValidationError);
}

TEST_CASE("work peaks exactly at the charging time in the strong regime") {
    const SingleChargerParams params = params_for(0.7, 2, 20.0);
    const auto time = std::get<FiniteChargingTime>(charging_time(params));
    const double peak = battery_ergotropy(params, time.t_bar);
    for (int k = 0; k <= 50; ++k) {
        const double t = time.t_bar * k / 50.0;
        CHECK(battery_ergotropy(params, t) <= peak + 1e-12);
    }
}

TEST_CASE("joint battery work strictly beats the per-cell sum at the peak") {
    struct Case {
        int m;
        double joint;
        double cells;
    };
    for (const auto& [m, joint, cells] :
         {Case{2, kJointM2, kCellsM2}, Case{3, kJointM3, kCellsM3}}) {
        const SingleChargerParams params = params_for(0.8, m, 20.0);
        const auto time = std::get<FiniteChargingTime>(charging_time(params));
        CHECK(time.battery_ergotropy_at_t_bar == doctest::Approx(joint).epsilon(1e-9));
        CHECK(m * time.cell_ergotropy_at_t_bar == doctest::Approx(cells).epsilon(1e-9));
        CHECK(time.battery_ergotropy_at_t_bar > m * time.cell_ergotropy_at_t_bar);
    }
}

TEST_CASE("very strong coupling transfers almost all charger work (m=1)") {
    const SingleChargerParams params = params_for(0.63, 1, 1e4);
    const auto time = std::get<FiniteChargingTime>(charging_time(params));
    CHECK(std::abs(time.battery_ergotropy_at_t_bar - 0.63) < 1e-3);
}

} // TEST_SUITE
