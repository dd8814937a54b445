#include "qbat/ergotropy.hpp"

#include "qbat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbat {

namespace {

// Round-off can push a nonnegative quantity microscopically negative;
// anything worse than this signals a real bug.
constexpr double kNegativeClampTol = 1e-10;

double clamp_nonnegative(double value, const char* what) {
    if (value < -kNegativeClampTol) {
        throw NumericsError(std::string(what) + " came out negative beyond tolerance: " +
                            std::to_string(value));
    }
    return std::max(value, 0.0);
}

} // namespace

Eigensystem validate_density_operator(const Matrix& rho) {
    if (rho.rows() != rho.cols()) throw DimensionError("density operator is not square");
    const double herm = hermiticity_deviation(rho);
    if (herm > kHermitianTol) {
        throw ValidationError("density operator deviates from Hermiticity by " +
                              std::to_string(herm));
    }
    const double trace_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (trace_dev > kDensityTraceTol) {
        throw ValidationError("density operator trace deviates from 1 by " +
                              std::to_string(trace_dev));
    }
    Eigensystem es = eig_hermitian(rho);
    if (es.values.minCoeff() < kDensityEigTol) {
        throw ValidationError("density operator has negative eigenvalue " +
                              std::to_string(es.values.minCoeff()));
    }
    return es;
}

ErgotropyEvaluator::ErgotropyEvaluator(Matrix hamiltonian)
    : h_(std::move(hamiltonian)), eig_(eig_hermitian(h_)) {
    identity_basis_ = eig_.vectors.isIdentity(0.0);
}

double ErgotropyEvaluator::mean_energy(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
        throw DimensionError("mean_energy: state and Hamiltonian dimensions differ");
    }
    // tr(rho H) without forming the product.
    const Complex tr = rho.cwiseProduct(h_.transpose()).sum();
    if (std::abs(tr.imag()) > 1e-10) {
        throw ValidationError("mean_energy: trace has imaginary part " +
                              std::to_string(tr.imag()));
    }
    return tr.real();
}

ErgotropyBreakdown ErgotropyEvaluator::breakdown(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
        throw DimensionError("ergotropy: state and Hamiltonian dimensions differ");
    }
    const Eigensystem rho_eig = validate_density_operator(rho);
    const Eigen::Index d = dim();

    // Populations in the energy eigenbasis, energies ascending.
    RealVector populations(d);
    if (identity_basis_) {
        populations = rho.diagonal().real();
    } else {
        populations = (eig_.vectors.adjoint() * rho * eig_.vectors).diagonal().real();
    }

    // Spectrum of rho descending; populations rearranged descending.
    RealVector r_desc = rho_eig.values.reverse();
    RealVector pop_desc = populations;
    std::sort(pop_desc.begin(), pop_desc.end(), std::greater<double>());

    double total = 0.0;
    double incoherent = 0.0;
    double mean = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double eps = eig_.values[k];
        total += eps * (populations[k] - r_desc[k]);
        incoherent += eps * (populations[k] - pop_desc[k]);
        mean += eps * populations[k];
    }

    ErgotropyBreakdown out;
    out.total = clamp_nonnegative(total, "ergotropy");
    out.incoherent = clamp_nonnegative(incoherent, "incoherent ergotropy");
    out.coherent = clamp_nonnegative(out.total - out.incoherent, "coherent ergotropy");
    out.mean_energy = mean;
    return out;
}

Matrix ErgotropyEvaluator::passive_state(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
        throw DimensionError("passive_state: state and Hamiltonian dimensions differ");
    }
    const Eigensystem rho_eig = validate_density_operator(rho);
    const Eigen::Index d = dim();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double r = rho_eig.values[d - 1 - k]; // descending
        out += r * (eig_.vectors.col(k) * eig_.vectors.col(k).adjoint());
    }
    return out;
}

double ergotropy(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).ergotropy(rho);
}

double incoherent_ergotropy(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).incoherent_ergotropy(rho);
}

double coherent_ergotropy(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).coherent_ergotropy(rho);
}

double mean_energy(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).mean_energy(rho);
}

Matrix passive_state(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).passive_state(rho);
}

ErgotropyBreakdown ergotropy_breakdown(const Matrix& rho, const Matrix& h) {
    return ErgotropyEvaluator(h).breakdown(rho);
}

} // namespace qbat
