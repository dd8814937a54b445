// closed_form.hpp — Exact solution for a single charging qubit in a
// superposition state and an m-cell battery starting from the ground state.
// Serves as the independent reference the numerical integrator is checked
// against.
//
// The single-excitation sector evolves through one scalar amplitude p(t);
// everything else (battery state, ergotropies, charging time) follows from
// it in closed form. All returned energies are in units of omega0, times are
// physical (multiply by lambda for the dimensionless clock).

#pragma once

#include "qbat/linalg.hpp"

#include <complex>
#include <variant>

namespace qbat {

struct SingleChargerParams {
    double c1 = 1.0;           // initial excited weight of the charger
    int m_cells = 1;
    double lambda = 1.0;       // pseudomode decay rate
    double coupling_ratio = 1; // R = sqrt(2) Omega / lambda

    // 1 - 2(m+1)R^2: positive in the overdamped (weak) regime, negative in
    // the oscillatory (strong) one.
    double discriminant() const;

    // zeta = lambda * sqrt(discriminant), principal branch; purely imaginary
    // in the strong regime.
    std::complex<double> zeta() const;

    void validate() const;
};

// p(t) = exp(-lambda t / 2) (cosh(zeta t/2) + (lambda/zeta) sinh(zeta t/2)),
// evaluated in complex arithmetic (the expression is even in zeta, so the
// imaginary part cancels); zeta -> 0 handled by its limit.
double p_coefficient(const SingleChargerParams& params, double t);

struct NuCoefficients {
    double nu1 = 1.0; // surviving charger amplitude factor
    double nu2 = 0.0; // amplitude transferred to each battery cell
};

// nu1 = (p + m) / (m+1), nu2 = (p - 1) / (m+1).
NuCoefficients nu_coefficients(const SingleChargerParams& params, double t);

// Rank <= 2 battery state on 2^m dimensions: the transferred single-excitation
// branch plus the weight left on the ground state.
Matrix battery_state(const SingleChargerParams& params, double t);

// Ergotropy of the joint m-cell battery, in units of omega0.
double battery_ergotropy(const SingleChargerParams& params, double t);
double battery_ergotropy_from_nu2(const SingleChargerParams& params, double nu2);

// Ergotropy of one battery cell (identical for every cell), in units of
// omega0.
double cell_ergotropy(const SingleChargerParams& params, double t);
double cell_ergotropy_from_nu2(const SingleChargerParams& params, double nu2);

// Strong regime: |nu2| peaks at a finite time 2*pi/|zeta|.
struct FiniteChargingTime {
    double t_bar = 0.0; // physical time; lambda * t_bar is dimensionless
    double nu2_at_t_bar = 0.0;
    double battery_ergotropy_at_t_bar = 0.0; // units of omega0
    double cell_ergotropy_at_t_bar = 0.0;    // units of omega0
};

// Weak regime: |nu2| saturates only asymptotically; the limit values are
// reached as p -> 0.
struct UnboundedChargingTime {
    double limiting_nu2 = 0.0; // -1/(m+1)
    double limiting_battery_ergotropy = 0.0; // units of omega0
    double limiting_cell_ergotropy = 0.0;    // units of omega0
};

using ChargingTime = std::variant<FiniteChargingTime, UnboundedChargingTime>;

// Throws ValidationError on the degenerate boundary 2(m+1)R^2 == 1 where
// zeta vanishes. Independent of c1.
ChargingTime charging_time(const SingleChargerParams& params);

} // namespace qbat
