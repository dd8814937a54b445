#include "qbat/closed_form.hpp"

#include "qbat/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qbat {

namespace {

constexpr double kDegenerateTol = 1e-12;

} // namespace

double SingleChargerParams::discriminant() const {
    const double r = coupling_ratio;
    return 1.0 - 2.0 * (m_cells + 1) * r * r;
}

std::complex<double> SingleChargerParams::zeta() const {
    return lambda * std::sqrt(std::complex<double>(discriminant(), 0.0));
}

void SingleChargerParams::validate() const {
    if (!(c1 >= 0.0 && c1 <= 1.0)) throw ValidationError("c1 must lie in [0, 1]");
    if (m_cells < 1) throw ValidationError("m_cells must be >= 1");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (coupling_ratio < 0.0) throw ValidationError("coupling ratio must be nonnegative");
}

double p_coefficient(const SingleChargerParams& params, double t) {
    params.validate();
    if (t < 0.0) throw ValidationError("p_coefficient: t must be >= 0");

    if (std::abs(params.discriminant()) < kDegenerateTol) {
        return std::exp(-0.5 * params.lambda * t) * (1.0 + 0.5 * params.lambda * t);
    }
    // exp(-lt/2)(cosh(zt/2) + (l/z)sinh(zt/2)) regrouped as a sum of two
    // decaying complex exponentials, so the overdamped branch cannot
    // overflow at large t: Re(z) <= l for the principal root.
    const std::complex<double> z = params.zeta();
    const double l = params.lambda;
    const std::complex<double> p = 0.5 * (1.0 + l / z) * std::exp(0.5 * (z - l) * t) +
                                   0.5 * (1.0 - l / z) * std::exp(-0.5 * (z + l) * t);
    if (std::abs(p.imag()) > 1e-12 * (1.0 + std::abs(p.real()))) {
        throw NumericsError("p_coefficient: residual imaginary part " + std::to_string(p.imag()));
    }
    return p.real();
}

NuCoefficients nu_coefficients(const SingleChargerParams& params, double t) {
    const double p = p_coefficient(params, t);
    const double denom = params.m_cells + 1.0;
    return NuCoefficients{(p + params.m_cells) / denom, (p - 1.0) / denom};
}

Matrix battery_state(const SingleChargerParams& params, double t) {
    const auto [nu1, nu2] = nu_coefficients(params, t);
    (void)nu1;
    const int m = params.m_cells;
    const double c1 = params.c1;
    const Eigen::Index dim = Eigen::Index{1} << m;

    // xi = sqrt(c1) nu2 sum_l |l-th cell excited> + sqrt(1-c1) |all ground>
    Vector xi = Vector::Zero(dim);
    xi[0] = std::sqrt(1.0 - c1);
    for (int l = 1; l <= m; ++l) {
        xi[Eigen::Index{1} << (m - l)] = std::sqrt(c1) * nu2;
    }
    Matrix rho = xi * xi.adjoint();
    rho(0, 0) += c1 * (1.0 - m * nu2 * nu2);
    return rho;
}

double battery_ergotropy_from_nu2(const SingleChargerParams& params, double nu2) {
    const double m = params.m_cells;
    const double c1 = params.c1;
    const double x = nu2 * nu2;
    const double radicand = 1.0 + 4.0 * m * c1 * c1 * x * (m * x - 1.0);
    return m * c1 * x + 0.5 * std::sqrt(std::max(radicand, 0.0)) - 0.5;
}

double cell_ergotropy_from_nu2(const SingleChargerParams& params, double nu2) {
    const double c1 = params.c1;
    const double x = nu2 * nu2;
    const double radicand = 1.0 + 4.0 * c1 * c1 * x * (x - 1.0);
    return c1 * x + 0.5 * std::sqrt(std::max(radicand, 0.0)) - 0.5;
}

double battery_ergotropy(const SingleChargerParams& params, double t) {
    return battery_ergotropy_from_nu2(params, nu_coefficients(params, t).nu2);
}

double cell_ergotropy(const SingleChargerParams& params, double t) {
    return cell_ergotropy_from_nu2(params, nu_coefficients(params, t).nu2);
}

ChargingTime charging_time(const SingleChargerParams& params) {
    params.validate();
    const double disc = params.discriminant();
    if (std::abs(disc) < kDegenerateTol) {
        throw ValidationError("charging_time: degenerate boundary 2(m+1)R^2 == 1");
    }
    if (disc < 0.0) {
        const double abs_zeta = std::abs(params.zeta());
        FiniteChargingTime out;
        out.t_bar = 2.0 * std::numbers::pi / abs_zeta;
        out.nu2_at_t_bar = nu_coefficients(params, out.t_bar).nu2;
        out.battery_ergotropy_at_t_bar = battery_ergotropy_from_nu2(params, out.nu2_at_t_bar);
        out.cell_ergotropy_at_t_bar = cell_ergotropy_from_nu2(params, out.nu2_at_t_bar);
        return out;
    }
    UnboundedChargingTime out;
    out.limiting_nu2 = -1.0 / (params.m_cells + 1.0);
    out.limiting_battery_ergotropy = battery_ergotropy_from_nu2(params, out.limiting_nu2);
    out.limiting_cell_ergotropy = cell_ergotropy_from_nu2(params, out.limiting_nu2);
    return out;
}

} // namespace qbat
