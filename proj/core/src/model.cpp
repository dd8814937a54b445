#include "qbat/model.hpp"

#include "qbat/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace qbat {

namespace {

void require_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1], got " +
                              std::to_string(v));
    }
}

// sqrt(c)|1> + sqrt(1-c)|0>, ground state at index 0.
Vector superposed_qubit(double c) {
    Vector v(2);
    v << std::sqrt(1.0 - c), std::sqrt(c);
    return v;
}

Vector kron_vectors(const std::vector<Vector>& factors) {
    Vector out = Vector::Ones(1);
    for (const Vector& f : factors) {
        Vector next(out.size() * f.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next.segment(i * f.size(), f.size()) = out[i] * f;
        }
        out = next;
    }
    return out;
}

} // namespace

ModelSpec ModelSpec::from_coupling_ratio(int n, int m, double R, int ncut) {
    ModelSpec spec;
    spec.n_chargers = n;
    spec.m_cells = m;
    spec.omega0 = 1.0;
    spec.lambda = 1.0;
    spec.Omega = R / std::sqrt(2.0);
    spec.ncut = ncut < 0 ? n + m : ncut;
    spec.validate();
    return spec;
}

void ModelSpec::validate() const {
    if (n_chargers < 1) throw ValidationError("n_chargers must be >= 1");
    if (m_cells < 1) throw ValidationError("m_cells must be >= 1");
    if (!(omega0 > 0.0)) throw ValidationError("omega0 must be positive");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (Omega < 0.0) throw ValidationError("Omega must be nonnegative");
    if (num_qubits() > 12) {
        throw ValidationError("register of " + std::to_string(num_qubits()) +
                              " qubits exceeds the supported dense range");
    }
    // The interaction conserves total excitation number and dissipation only
    // lowers it, so ncut = n + m captures the dynamics exactly; anything
    // smaller silently corrupts it.
    if (ncut < num_qubits()) {
        throw ValidationError("ncut must be >= n_chargers + m_cells (got " +
                              std::to_string(ncut) + ")");
    }
}

void validate_scenario(const ModelSpec& spec, const ScenarioSpec& scen) {
    spec.validate();
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ProductChargers>) {
                if (static_cast<int>(s.c.size()) != spec.n_chargers) {
                    throw ValidationError(
                        "product scenario needs exactly n_chargers coefficients, got " +
                        std::to_string(s.c.size()));
                }
                for (double ci : s.c) require_unit_interval(ci, "c_i");
            } else if constexpr (std::is_same_v<T, ActiveBattery>) {
                require_unit_interval(s.e1, "e1");
            } else if constexpr (std::is_same_v<T, BellChargers>) {
                if (spec.n_chargers != 2) {
                    throw ValidationError("Bell charger states require n_chargers == 2");
                }
                require_unit_interval(s.c1, "c1");
            } else if constexpr (std::is_same_v<T, MixedCharger>) {
                require_unit_interval(s.c1, "c1");
            } else if constexpr (std::is_same_v<T, MixedBattery>) {
                require_unit_interval(s.e1, "e1");
            }
        },
        scen);
}

std::string scenario_label(const ScenarioSpec& scen) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ProductChargers>) return "product";
            if constexpr (std::is_same_v<T, ActiveBattery>) return "active-battery";
            if constexpr (std::is_same_v<T, BellChargers>) {
                switch (s.kind) {
                    case BellKind::PsiPlus: return "bell-psi-plus";
                    case BellKind::PsiMinus: return "bell-psi-minus";
                    case BellKind::PhiPlus: return "bell-phi-plus";
                    case BellKind::PhiMinus: return "bell-phi-minus";
                }
            }
            if constexpr (std::is_same_v<T, MixedCharger>) return "mixed-charger";
            if constexpr (std::is_same_v<T, MixedBattery>) return "mixed-battery";
            return "unknown";
        },
        scen);
}

Matrix qubit_raising() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

Matrix qubit_lowering() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

Matrix boson_lowering(Eigen::Index nlevels) {
    if (nlevels < 1) throw DimensionError("boson_lowering: nlevels must be >= 1");
    Matrix m = Matrix::Zero(nlevels, nlevels);
    for (Eigen::Index k = 1; k < nlevels; ++k) {
        m(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return m;
}

Matrix boson_number(Eigen::Index nlevels) {
    if (nlevels < 1) throw DimensionError("boson_number: nlevels must be >= 1");
    Matrix m = Matrix::Zero(nlevels, nlevels);
    for (Eigen::Index k = 0; k < nlevels; ++k) m(k, k) = static_cast<double>(k);
    return m;
}

HilbertLayout extended_layout(const ModelSpec& spec) {
    std::vector<Eigen::Index> dims(static_cast<std::size_t>(spec.num_qubits()), 2);
    dims.push_back(spec.pseudomode_dim());
    return HilbertLayout(std::move(dims));
}

std::vector<std::size_t> charger_indices(const ModelSpec& spec) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(spec.n_chargers));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

std::vector<std::size_t> battery_indices(const ModelSpec& spec) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(spec.m_cells));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<std::size_t>(spec.n_chargers) + i;
    }
    return idx;
}

Matrix qubit_register_hamiltonian(int num_qubits, double omega0) {
    if (num_qubits < 1) throw DimensionError("qubit_register_hamiltonian: need >= 1 qubit");
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index basis = 0; basis < dim; ++basis) {
        h(basis, basis) = omega0 * std::popcount(static_cast<unsigned long long>(basis));
    }
    return h;
}

Matrix build_system_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    return qubit_register_hamiltonian(spec.num_qubits(), spec.omega0);
}

Matrix charger_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    return qubit_register_hamiltonian(spec.n_chargers, spec.omega0);
}

Matrix battery_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    return qubit_register_hamiltonian(spec.m_cells, spec.omega0);
}

Matrix interaction_operator(int num_qubits, int ncut, double Omega) {
    if (num_qubits < 1) throw DimensionError("interaction_operator: need >= 1 qubit");
    if (ncut < 1) throw DimensionError("interaction_operator: need ncut >= 1");
    const Eigen::Index qdim = Eigen::Index{1} << num_qubits;
    const Eigen::Index pdim = ncut + 1;
    const Eigen::Index dim = qdim * pdim;

    // <...1_i..., k-1| V |...0_i..., k> = Omega sqrt(k); Hermitian closure.
    Matrix v = Matrix::Zero(dim, dim);
    for (Eigen::Index basis = 0; basis < qdim; ++basis) {
        for (int i = 0; i < num_qubits; ++i) {
            const Eigen::Index bit = Eigen::Index{1} << (num_qubits - 1 - i);
            if ((basis & bit) != 0) continue; // qubit i already excited
            const Eigen::Index excited = basis | bit;
            for (Eigen::Index k = 1; k <= ncut; ++k) {
                const double amp = Omega * std::sqrt(static_cast<double>(k));
                v(excited * pdim + (k - 1), basis * pdim + k) += amp;
                v(basis * pdim + k, excited * pdim + (k - 1)) += amp;
            }
        }
    }
    return v;
}

Matrix build_interaction(const ModelSpec& spec) {
    spec.validate();
    return interaction_operator(spec.num_qubits(), spec.ncut, spec.Omega);
}

Matrix pseudomode_lowering(const ModelSpec& spec) {
    spec.validate();
    return kron(Matrix::Identity(spec.qubit_dim(), spec.qubit_dim()),
                boson_lowering(spec.pseudomode_dim()));
}

Matrix pseudomode_number(const ModelSpec& spec) {
    spec.validate();
    return kron(Matrix::Identity(spec.qubit_dim(), spec.qubit_dim()),
                boson_number(spec.pseudomode_dim()));
}

Matrix initial_system_state(const ModelSpec& spec, const ScenarioSpec& scen) {
    validate_scenario(spec, scen);
    const int n = spec.n_chargers;
    const int m = spec.m_cells;

    const Vector ground = superposed_qubit(0.0);
    const Vector excited = superposed_qubit(1.0);

    return std::visit(
        [&](const auto& s) -> Matrix {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ProductChargers>) {
                std::vector<Vector> factors;
                for (double ci : s.c) factors.push_back(superposed_qubit(ci));
                for (int j = 0; j < m; ++j) factors.push_back(ground);
                const Vector psi = kron_vectors(factors);
                return psi * psi.adjoint();
            } else if constexpr (std::is_same_v<T, ActiveBattery>) {
                std::vector<Vector> factors;
                for (int j = 0; j < n; ++j) factors.push_back(excited);
                factors.push_back(superposed_qubit(s.e1));
                for (int j = 1; j < m; ++j) factors.push_back(ground);
                const Vector psi = kron_vectors(factors);
                return psi * psi.adjoint();
            } else if constexpr (std::is_same_v<T, BellChargers>) {
                Vector pair = Vector::Zero(4);
                const double a = std::sqrt(s.c1);
                const double b = std::sqrt(1.0 - s.c1);
                switch (s.kind) {
                    case BellKind::PsiPlus: pair[2] = a; pair[1] = b; break;   // |10> + |01>
                    case BellKind::PsiMinus: pair[2] = a; pair[1] = -b; break; // |10> - |01>
                    case BellKind::PhiPlus: pair[3] = a; pair[0] = b; break;   // |11> + |00>
                    case BellKind::PhiMinus: pair[3] = a; pair[0] = -b; break; // |11> - |00>
                }
                std::vector<Vector> factors;
                for (int j = 0; j < m; ++j) factors.push_back(ground);
                const Vector battery = kron_vectors(factors);
                Vector psi(pair.size() * battery.size());
                for (Eigen::Index i = 0; i < pair.size(); ++i) {
                    psi.segment(i * battery.size(), battery.size()) = pair[i] * battery;
                }
                return psi * psi.adjoint();
            } else if constexpr (std::is_same_v<T, MixedCharger>) {
                Matrix q = Matrix::Zero(2, 2);
                q(0, 0) = 1.0 - s.c1;
                q(1, 1) = s.c1;
                std::vector<Matrix> factors;
                for (int j = 0; j < n; ++j) factors.push_back(q);
                for (int j = 0; j < m; ++j) factors.push_back(ground * ground.adjoint());
                return kron_all(factors);
            } else { // MixedBattery
                Matrix q = Matrix::Zero(2, 2);
                q(0, 0) = 1.0 - s.e1;
                q(1, 1) = s.e1;
                std::vector<Matrix> factors;
                for (int j = 0; j < n; ++j) factors.push_back(excited * excited.adjoint());
                factors.push_back(q);
                for (int j = 1; j < m; ++j) factors.push_back(ground * ground.adjoint());
                return kron_all(factors);
            }
        },
        scen);
}

Matrix build_initial_state(const ModelSpec& spec, const ScenarioSpec& scen) {
    const Matrix system = initial_system_state(spec, scen);
    Matrix vacuum = Matrix::Zero(spec.pseudomode_dim(), spec.pseudomode_dim());
    vacuum(0, 0) = 1.0;
    return kron(system, vacuum);
}

} // namespace qbat
