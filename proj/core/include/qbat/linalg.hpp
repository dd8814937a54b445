// linalg.hpp — Dense complex kernels for small Hilbert spaces: Kronecker
// products, partial trace over a labeled tensor factorization, and Hermitian
// eigendecomposition with deterministic ordering.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace qbat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Max absolute deviation from Hermiticity accepted by eig_hermitian and the
// density-operator validators. Absorbs integrator round-off without masking
// genuine bugs.
inline constexpr double kHermitianTol = 1e-10;

// Ordered tensor factorization of a register. The convention everywhere is
// [charger qubit 1 .. charger qubit n, battery cell 1 .. battery cell m,
// pseudomode], with the first factor most significant in the composite index
// (index = ((i_1*d_2 + i_2)*d_3 + ...)).
struct HilbertLayout {
    std::vector<Eigen::Index> dims;

    HilbertLayout() = default;
    explicit HilbertLayout(std::vector<Eigen::Index> d) : dims(std::move(d)) {}

    Eigen::Index total_dim() const;
    std::size_t num_factors() const { return dims.size(); }

    // Throws DimensionError unless op is square with dimension total_dim().
    void require_matches(const Matrix& op) const;
};

// Standard Kronecker product; dims multiply, first operand most significant.
Matrix kron(const Matrix& a, const Matrix& b);

// Left-to-right Kronecker product of a factor list (first factor most
// significant). Empty list yields the 1x1 identity.
Matrix kron_all(const std::vector<Matrix>& factors);

// Reduced operator on the kept factors (indices into layout.dims, any order,
// duplicates rejected). Result factors keep layout order. Preserves trace and
// Hermiticity.
Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout,
                     const std::vector<std::size_t>& keep);

double hermiticity_deviation(const Matrix& a);

struct Eigensystem {
    RealVector values; // ascending
    Matrix vectors;    // orthonormal columns, vectors.col(k) <-> values[k]
};

// Eigendecomposition of a Hermitian matrix (validated against kHermitianTol).
// Eigenvalues ascending with a stable tie-break, so exactly diagonal inputs
// keep the computational basis within degenerate blocks.
Eigensystem eig_hermitian(const Matrix& h);

} // namespace qbat
