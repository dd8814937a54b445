// model.hpp — Physical model: n charging qubits and an m-cell qubit battery,
// all resonantly coupled to one damped bosonic pseudomode that stands in for
// a Lorentzian reservoir. Builds operators, parameter sets, and the initial
// states used throughout.

#pragma once

#include "qbat/linalg.hpp"

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace qbat {

struct ModelSpec {
    int n_chargers = 1;
    int m_cells = 1;
    double omega0 = 1.0; // qubit transition frequency (energy unit)
    double Omega = 0.0;  // effective qubit-pseudomode coupling
    double lambda = 1.0; // pseudomode decay rate; 1/lambda is the time unit
    int ncut = 2;        // pseudomode photon-number truncation

    // omega0 = lambda = 1, Omega chosen so coupling_ratio() == R.
    // ncut < 0 means "exact truncation" n_chargers + m_cells.
    static ModelSpec from_coupling_ratio(int n, int m, double R, int ncut = -1);

    // R = sqrt(2) * Omega / lambda; R >> 1 is the strong-coupling (good
    // cavity) regime, R << 1 the weak one.
    double coupling_ratio() const { return std::sqrt(2.0) * Omega / lambda; }

    int num_qubits() const { return n_chargers + m_cells; }
    Eigen::Index qubit_dim() const { return Eigen::Index{1} << num_qubits(); }
    Eigen::Index pseudomode_dim() const { return ncut + 1; }
    Eigen::Index extended_dim() const { return qubit_dim() * pseudomode_dim(); }

    void validate() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// ---------------------------- initial states --------------------------------

// Each charging qubit i in sqrt(c_i)|1> + sqrt(1-c_i)|0>, battery in the
// ground state.
struct ProductChargers {
    std::vector<double> c;

    friend bool operator==(const ProductChargers&, const ProductChargers&) = default;
};

// All chargers excited; first battery cell in sqrt(e1)|1> + sqrt(1-e1)|0>,
// remaining cells in the ground state.
struct ActiveBattery {
    double e1 = 0.0;

    friend bool operator==(const ActiveBattery&, const ActiveBattery&) = default;
};

enum class BellKind { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

// Two chargers in sqrt(c1)|10> +/- sqrt(1-c1)|01> (Psi) or
// sqrt(c1)|11> +/- sqrt(1-c1)|00> (Phi); battery in the ground state.
struct BellChargers {
    BellKind kind = BellKind::PsiPlus;
    double c1 = 0.5;

    friend bool operator==(const BellChargers&, const BellChargers&) = default;
};

// Each charger in the diagonal mixture diag{1-c1, c1} (excited weight c1);
// battery in the ground state.
struct MixedCharger {
    double c1 = 0.0;

    friend bool operator==(const MixedCharger&, const MixedCharger&) = default;
};

// All chargers excited; first battery cell in diag{1-e1, e1} (excited
// weight e1), remaining cells in the ground state.
struct MixedBattery {
    double e1 = 0.0;

    friend bool operator==(const MixedBattery&, const MixedBattery&) = default;
};

using ScenarioSpec =
    std::variant<ProductChargers, ActiveBattery, BellChargers, MixedCharger, MixedBattery>;

void validate_scenario(const ModelSpec& spec, const ScenarioSpec& scen);
std::string scenario_label(const ScenarioSpec& scen);

// ------------------------------- operators ----------------------------------

Matrix qubit_raising();  // |1><0|
Matrix qubit_lowering(); // |0><1|

// Bosonic ladder on nlevels Fock states: a|k> = sqrt(k)|k-1>.
Matrix boson_lowering(Eigen::Index nlevels);
Matrix boson_number(Eigen::Index nlevels);

// [2]*(n+m) followed by the pseudomode dimension.
HilbertLayout extended_layout(const ModelSpec& spec);
std::vector<std::size_t> charger_indices(const ModelSpec& spec);
std::vector<std::size_t> battery_indices(const ModelSpec& spec);

// omega0 * sum_i |1><1|_i on num_qubits qubits: diagonal, eigenvalue
// omega0 * (number of excited qubits) on each basis state.
Matrix qubit_register_hamiltonian(int num_qubits, double omega0);

Matrix build_system_hamiltonian(const ModelSpec& spec); // all n+m qubits
Matrix charger_hamiltonian(const ModelSpec& spec);      // charger register only
Matrix battery_hamiltonian(const ModelSpec& spec);      // battery register only

// Omega * sum_i (sigma_i^+ a + sigma_i^- a^dagger) on num_qubits qubits
// tensored with an (ncut+1)-level pseudomode.
Matrix interaction_operator(int num_qubits, int ncut, double Omega);
Matrix build_interaction(const ModelSpec& spec);

// Pseudomode lowering operator embedded in the extended register.
Matrix pseudomode_lowering(const ModelSpec& spec);
Matrix pseudomode_number(const ModelSpec& spec);

// Density operator of qubits (x) pseudomode vacuum for the given scenario.
Matrix build_initial_state(const ModelSpec& spec, const ScenarioSpec& scen);

// Qubit-register density operator of the scenario (no pseudomode factor).
Matrix initial_system_state(const ModelSpec& spec, const ScenarioSpec& scen);

} // namespace qbat
