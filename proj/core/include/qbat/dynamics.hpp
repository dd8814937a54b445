// dynamics.hpp — Fixed-step integration of the damped-pseudomode master
// equation and per-step extraction of reduced states and energy records.

#pragma once

#include "qbat/ergotropy.hpp"
#include "qbat/model.hpp"

#include <vector>

namespace qbat {

struct IntegratorConfig {
    double dt = 1e-3;      // step, in units of 1/lambda
    double t_max = 1.0;    // horizon, in units of 1/lambda
    int record_stride = 1; // store every k-th step

    // dt = 0.002 / max(1, R); records thinned to at most ~4000 samples.
    static IntegratorConfig defaults(const ModelSpec& spec, double t_max_lambda);

    // Empirical stability bound for the classic Runge-Kutta step on this
    // generator: 0.01 / max(1, R sqrt(n+m)) in lambda units.
    static double max_stable_dt(const ModelSpec& spec);

    void validate(const ModelSpec& spec) const;
};

// Time series of reduced states plus the per-step energy records. All
// energies are in units of omega0 and times are the dimensionless lambda*t.
struct Trajectory {
    ModelSpec model;
    ScenarioSpec scenario;
    IntegratorConfig integrator;

    std::vector<double> times;
    std::vector<Matrix> battery_states;
    std::vector<Matrix> charger_states;
    std::vector<ErgotropyBreakdown> battery;
    std::vector<ErgotropyBreakdown> charger;
    std::vector<double> pseudomode_occupation;
    double final_trace_deviation = 0.0;

    std::size_t size() const { return times.size(); }
};

// Right-hand side of the master equation in the interaction picture:
//   -i[V, rho] + lambda (2 a rho a^dag - a^dag a rho - rho a^dag a).
// Traceless and Hermitian for Hermitian input.
Matrix lindblad_rhs(const Matrix& varrho, const Matrix& v, double lambda, const Matrix& a);

// Classic fourth-order Runge-Kutta on the matrix-valued equation. Aborts
// with NumericsError if the step size violates the stability bound, the
// trace drifts, or a recorded reduced state loses positivity beyond
// tolerance.
Trajectory evolve(const ModelSpec& spec, const ScenarioSpec& scen, const IntegratorConfig& cfg);

// Largest change in any recorded energy value when every recorded reduced
// state is conjugated by its free-evolution phase exp(-i H t). Confirms that
// the records may be computed directly on interaction-picture states.
double max_rotating_frame_deviation(const Trajectory& traj);

} // namespace qbat
