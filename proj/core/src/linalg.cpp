#include "qbat/linalg.hpp"

#include "qbat/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qbat {

Eigen::Index HilbertLayout::total_dim() const {
    Eigen::Index d = 1;
    for (Eigen::Index f : dims) {
        if (f < 2) throw DimensionError("HilbertLayout: every factor dimension must be >= 2");
        d *= f;
    }
    return d;
}

void HilbertLayout::require_matches(const Matrix& op) const {
    if (op.rows() != op.cols()) {
        throw DimensionError("HilbertLayout: operator is not square");
    }
    if (op.rows() != total_dim()) {
        throw DimensionError("HilbertLayout: operator dimension " + std::to_string(op.rows()) +
                             " does not match layout dimension " + std::to_string(total_dim()));
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const Matrix& f : factors) out = kron(out, f);
    return out;
}

Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout,
                     const std::vector<std::size_t>& keep) {
    layout.require_matches(rho);
    if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");

    std::vector<std::size_t> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw DimensionError("partial_trace: duplicate factor index in keep set");
    }
    if (kept.back() >= layout.num_factors()) {
        throw DimensionError("partial_trace: keep index out of range");
    }

    const std::size_t nf = layout.num_factors();
    // stride[f] = product of dims after factor f (first factor most significant)
    std::vector<Eigen::Index> stride(nf, 1);
    for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * layout.dims[f];

    std::vector<std::size_t> traced;
    for (std::size_t f = 0, k = 0; f < nf; ++f) {
        if (k < kept.size() && kept[k] == f) {
            ++k;
        } else {
            traced.push_back(f);
        }
    }

    // Composite offsets of every kept / traced multi-index.
    auto offsets_for = [&](const std::vector<std::size_t>& factors) {
        Eigen::Index count = 1;
        for (std::size_t f : factors) count *= layout.dims[f];
        std::vector<Eigen::Index> offs(static_cast<std::size_t>(count), 0);
        Eigen::Index repeat = 1;
        for (std::size_t fi = factors.size(); fi-- > 0;) {
            const std::size_t f = factors[fi];
            const Eigen::Index dim = layout.dims[f];
            for (Eigen::Index idx = 0; idx < count; ++idx) {
                const Eigen::Index digit = (idx / repeat) % dim;
                offs[static_cast<std::size_t>(idx)] += digit * stride[f];
            }
            repeat *= dim;
        }
        return offs;
    };

    const std::vector<Eigen::Index> kept_off = offsets_for(kept);
    const std::vector<Eigen::Index> traced_off = offsets_for(traced);

    const auto kd = static_cast<Eigen::Index>(kept_off.size());
    Matrix out = Matrix::Zero(kd, kd);
    for (Eigen::Index b = 0; b < kd; ++b) {
        for (Eigen::Index a = 0; a < kd; ++a) {
            Complex acc{0.0, 0.0};
            for (const Eigen::Index t : traced_off) {
                acc += rho(kept_off[static_cast<std::size_t>(a)] + t,
                           kept_off[static_cast<std::size_t>(b)] + t);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

double hermiticity_deviation(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("hermiticity_deviation: matrix not square");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// Stable ascending sort of (value, original position); equal values keep the
// order the decomposition produced them in, so results are reproducible.
Eigensystem sorted_ascending(const RealVector& values, const Matrix& vectors) {
    const Eigen::Index d = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return values[i] < values[j]; });

    Eigensystem out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        out.values[k] = values[order[static_cast<std::size_t>(k)]];
        out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace

Eigensystem eig_hermitian(const Matrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("eig_hermitian: matrix not square");
    if (h.rows() == 0) throw DimensionError("eig_hermitian: empty matrix");
    const double dev = hermiticity_deviation(h);
    if (dev > kHermitianTol) {
        throw ValidationError("eig_hermitian: input deviates from Hermiticity by " +
                              std::to_string(dev));
    }

    const Eigen::Index d = h.rows();

    // Exactly diagonal input: keep the computational basis so degenerate
    // blocks stay in canonical order.
    bool diagonal = true;
    for (Eigen::Index j = 0; j < d && diagonal; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i != j && h(i, j) != Complex{0.0, 0.0}) {
                diagonal = false;
                break;
            }
        }
    }
    if (diagonal) {
        return sorted_ascending(h.diagonal().real(), Matrix::Identity(d, d));
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericsError("eig_hermitian: eigendecomposition failed to converge");
    }
    return sorted_ascending(solver.eigenvalues(), solver.eigenvectors());
}

} // namespace qbat
