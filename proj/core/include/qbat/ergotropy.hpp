// ergotropy.hpp — Maximal cyclic-unitary work extraction from a state
// relative to a Hamiltonian: total ergotropy, the associated passive state,
// and the split into the part reachable by population permutations alone
// (incoherent) and the remainder that needs coherence (coherent).

#pragma once

#include "qbat/linalg.hpp"

namespace qbat {

// Energies carry the units of the Hamiltonian passed in.
struct ErgotropyBreakdown {
    double total = 0.0;
    double incoherent = 0.0;
    double coherent = 0.0;
    double mean_energy = 0.0;
};

inline constexpr double kDensityTraceTol = 1e-8;
inline constexpr double kDensityEigTol = -1e-8;

// Checks Hermiticity, unit trace (tolerance kDensityTraceTol) and spectrum
// >= kDensityEigTol. Returns the (stably sorted, ascending) eigensystem so
// callers can reuse it.
Eigensystem validate_density_operator(const Matrix& rho);

// Binds a fixed Hamiltonian so repeated evaluations (e.g. along a
// trajectory) reuse its eigensystem.
class ErgotropyEvaluator {
public:
    explicit ErgotropyEvaluator(Matrix hamiltonian);

    Eigen::Index dim() const { return h_.rows(); }
    const Matrix& hamiltonian() const { return h_; }
    const Eigensystem& hamiltonian_eigensystem() const { return eig_; }

    ErgotropyBreakdown breakdown(const Matrix& rho) const;
    double ergotropy(const Matrix& rho) const { return breakdown(rho).total; }
    double incoherent_ergotropy(const Matrix& rho) const { return breakdown(rho).incoherent; }
    double coherent_ergotropy(const Matrix& rho) const { return breakdown(rho).coherent; }
    double mean_energy(const Matrix& rho) const;

    // State with the spectrum of rho and no extractable work: populations
    // sorted descending over the ascending energy eigenbasis.
    Matrix passive_state(const Matrix& rho) const;

private:
    Matrix h_;
    Eigensystem eig_;
    bool identity_basis_ = false;
};

// One-shot conveniences.
double ergotropy(const Matrix& rho, const Matrix& h);
double incoherent_ergotropy(const Matrix& rho, const Matrix& h);
double coherent_ergotropy(const Matrix& rho, const Matrix& h);
double mean_energy(const Matrix& rho, const Matrix& h);
Matrix passive_state(const Matrix& rho, const Matrix& h);
ErgotropyBreakdown ergotropy_breakdown(const Matrix& rho, const Matrix& h);

} // namespace qbat
