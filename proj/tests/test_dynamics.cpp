#include "doctest.h"

#include "qbat/closed_form.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"

#include "test_helpers.hpp"

#include <cmath>

using namespace qbat;

namespace {

IntegratorConfig cfg_for(const ModelSpec& spec, double t_max, int stride = 0) {
    IntegratorConfig cfg = IntegratorConfig::defaults(spec, t_max);
    if (stride > 0) cfg.record_stride = stride;
    return cfg;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("the global ground state is stationary") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 5.0);
    const Matrix v = build_interaction(spec);
    const Matrix a = pseudomode_lowering(spec);
    Matrix rho = Matrix::Zero(spec.extended_dim(), spec.extended_dim());
    rho(0, 0) = 1.0; // all qubits ground, pseudomode vacuum
    const Matrix rhs = lindblad_rhs(rho, v, spec.lambda, a);
    CHECK(rhs.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("a bare photon decays at rate 2 lambda") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 5.0);
    const Matrix a = pseudomode_lowering(spec);
    const Matrix v_off = Matrix::Zero(spec.extended_dim(), spec.extended_dim());
    const Eigen::Index idx = 1; // qubits ground, one photon
    Matrix rho = Matrix::Zero(spec.extended_dim(), spec.extended_dim());
    rho(idx, idx) = 1.0;
    const double lambda = 1.7;
    const Matrix rhs = lindblad_rhs(rho, v_off, lambda, a);
    CHECK(rhs(idx, idx).real() == doctest::Approx(-2.0 * lambda).epsilon(1e-13));
}

TEST_CASE("the generator is trace-free and Hermiticity-preserving") {
    std::mt19937 rng(7);
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 3.0);
    const Matrix v = build_interaction(spec);
    const Matrix a = pseudomode_lowering(spec);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix h = testing::random_hermitian(spec.extended_dim(), rng);
        const Matrix rhs = lindblad_rhs(h, v, spec.lambda, a);
        CHECK(std::abs(rhs.trace()) < 1e-12);
        CHECK(hermiticity_deviation(rhs) < 1e-12);
    }
}

TEST_CASE("the integrator reproduces one explicit Runge-Kutta step of the dense generator") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 2, 4.0);
    const ScenarioSpec scen = ProductChargers{{0.7}};
    const Matrix v = build_interaction(spec);
    const Matrix a = pseudomode_lowering(spec);

    IntegratorConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_max = 10 * cfg.dt;
    cfg.record_stride = 1;
    const Trajectory traj = evolve(spec, scen, cfg);

    // independent dense integration of the same equation
    Matrix rho = build_initial_state(spec, scen);
    const double h = cfg.dt / spec.lambda;
    for (int step = 0; step < 10; ++step) {
        const Matrix k1 = lindblad_rhs(rho, v, spec.lambda, a);
        const Matrix k2 = lindblad_rhs(rho + 0.5 * h * k1, v, spec.lambda, a);
        const Matrix k3 = lindblad_rhs(rho + 0.5 * h * k2, v, spec.lambda, a);
        const Matrix k4 = lindblad_rhs(rho + h * k3, v, spec.lambda, a);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const Matrix battery =
        partial_trace(rho, extended_layout(spec), battery_indices(spec));
    CHECK((battery - traj.battery_states.back()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("decoupled qubits do not move") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 0.0);
    const Trajectory traj = evolve(spec, ProductChargers{{0.8}}, cfg_for(spec, 1.0));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.battery[i].total == 0.0);
        CHECK((traj.battery_states[i] - traj.battery_states[0]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("trace deviation stays within 1e-7 over a strong-coupling run") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 20.0);
    const Trajectory traj = evolve(spec, ProductChargers{{0.8}}, cfg_for(spec, 2.0));
    CHECK(traj.final_trace_deviation <= 1e-7);
}

TEST_CASE("battery work matches the closed form pointwise (strong and weak)") {
    for (double r : {20.0, 0.1}) {
        for (double c1 : {1.0, 0.5}) {
            const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, r);
            const Trajectory traj = evolve(spec, ProductChargers{{c1}}, cfg_for(spec, 1.0));
            const SingleChargerParams params{c1, 1, spec.lambda, r};
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const double reference =
                    battery_ergotropy(params, traj.times[i] / spec.lambda);
                worst = std::max(worst, std::abs(traj.battery[i].total - reference));
            }
            CHECK(worst < 1e-5);
        }
    }
}

TEST_CASE("battery state matches the closed form for a two-cell battery") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 2, 20.0);
    const SingleChargerParams params{0.8, 2, spec.lambda, 20.0};
    const Trajectory traj = evolve(spec, ProductChargers{{0.8}}, cfg_for(spec, 0.2));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Matrix reference = battery_state(params, traj.times[i] / spec.lambda);
        worst = std::max(worst,
                         (traj.battery_states[i] - reference).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("excitations leave only through the pseudomode") {
    // d<N_exc>/dt = -2 lambda <a^dag a>, checked by central differences on
    // the recorded grid.
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 5.0);
    const Trajectory traj = evolve(spec, ProductChargers{{1.0}}, cfg_for(spec, 1.0, 1));
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double h = traj.times[i + 1] - traj.times[i - 1];
        const auto n_exc = [&](std::size_t k) {
            return traj.battery[k].mean_energy + traj.charger[k].mean_energy +
                   traj.pseudomode_occupation[k];
        };
        const double derivative = (n_exc(i + 1) - n_exc(i - 1)) / h; // per lambda*t
        const double expected = -2.0 * traj.pseudomode_occupation[i];
        worst = std::max(worst, std::abs(derivative - expected));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("half the initial charger energy survives the cascade (one charger, one cell)") {
    // The antisymmetric two-qubit combination is decoupled from the
    // pseudomode, so half of any single-excitation weight never decays.
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 2.0);
    {
        const Trajectory traj = evolve(spec, ProductChargers{{0.6}}, cfg_for(spec, 30.0));
        const double retained =
            traj.battery.back().mean_energy + traj.charger.back().mean_energy;
        CHECK(std::abs(retained - 0.3) < 1e-3);
    }
    {
        const Trajectory traj = evolve(spec, ActiveBattery{0.4}, cfg_for(spec, 30.0));
        const double retained =
            traj.battery.back().mean_energy + traj.charger.back().mean_energy;
        CHECK(std::abs(retained - 0.3) < 1e-3);
    }
}

TEST_CASE("weak coupling: energy arrives but never becomes extractable") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 0.1);
    const Trajectory traj = evolve(spec, ProductChargers{{1.0}}, cfg_for(spec, 30.0));
    const SingleChargerParams params{1.0, 1, spec.lambda, 0.1};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.battery[i].total <= 1e-10);
    }
    // mean energy follows |nu2|^2 and grows monotonically on this horizon
    const double final_reference =
        std::pow(nu_coefficients(params, traj.times.back()).nu2, 2);
    CHECK(std::abs(traj.battery.back().mean_energy - final_reference) < 1e-5);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj.battery[i].mean_energy >= traj.battery[i - 1].mean_energy - 1e-9);
    }
}

TEST_CASE("energy records are frame-independent") {
    for (int m : {1, 2}) {
        const ModelSpec spec = ModelSpec::from_coupling_ratio(1, m, 10.0);
        const Trajectory traj =
            evolve(spec, ProductChargers{{0.8}}, cfg_for(spec, 1.0, 50));
        CHECK(max_rotating_frame_deviation(traj) < 1e-10);
    }
}

TEST_CASE("a step size beyond the stability bound is rejected") {
    const ModelSpec spec = ModelSpec::from_coupling_ratio(1, 1, 20.0);
    IntegratorConfig cfg;
    cfg.dt = 1e-3; // bound is 0.01 / (20 sqrt(2))
    cfg.t_max = 1.0;
    CHECK_THROWS_AS(evolve(spec, ProductChargers{{1.0}}, cfg), NumericsError);
}

} // TEST_SUITE
