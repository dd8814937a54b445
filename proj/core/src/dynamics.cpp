#include "qbat/dynamics.hpp"

#include "qbat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qbat {

namespace {

constexpr double kTraceAbortTol = 1e-6;

ErgotropyBreakdown in_omega0_units(ErgotropyBreakdown b, double omega0) {
    b.total /= omega0;
    b.incoherent /= omega0;
    b.coherent /= omega0;
    b.mean_energy /= omega0;
    return b;
}

// Applies the master-equation generator with the operator structure made
// explicit: V enters through its list of nonzero entries (a handful per
// column), and the pseudomode dissipator reduces to shifted/scaled element
// access because a acts on the last tensor factor only. The state stays a
// dense matrix throughout; only Hermitian inputs are handled (the flow
// preserves Hermiticity, so this holds along every Runge-Kutta stage).
class Generator {
public:
    Generator(const ModelSpec& spec)
        : lambda_(spec.lambda), pdim_(spec.pseudomode_dim()), dim_(spec.extended_dim()) {
        const Matrix v = build_interaction(spec);
        for (Eigen::Index j = 0; j < dim_; ++j) {
            for (Eigen::Index i = 0; i < dim_; ++i) {
                if (v(i, j) != Complex{0.0, 0.0}) {
                    v_entries_.push_back({i, j, v(i, j)});
                }
            }
        }

        photon_.resize(dim_);
        shift_scale_.resize(dim_);
        for (Eigen::Index r = 0; r < dim_; ++r) {
            const Eigen::Index k = r % pdim_;
            photon_[r] = static_cast<double>(k);
            shift_scale_[r] = (k + 1 < pdim_) ? std::sqrt(static_cast<double>(k + 1)) : 0.0;
        }
    }

    Eigen::Index dim() const { return dim_; }

    // out = -i[V, rho] + lambda (2 a rho a^dag - N rho - rho N),  N = a^dag a.
    // Assumes Hermitian rho, so rho V = (V rho)^dag and one sparse product
    // suffices. The dissipator needs no matrix products at all: N scales
    // rows/columns by the photon index and a rho a^dag is a shifted read,
    // because a acts on the last tensor factor alone.
    void apply(const Matrix& rho, Matrix& out, Matrix& work) const {
        // work = V rho, scattered directly from the nonzero list; rho V is
        // then (V rho)^dag read in place.
        for (Eigen::Index c = 0; c < dim_; ++c) {
            Complex* wc = work.col(c).data();
            const Complex* rc = rho.col(c).data();
            std::fill(wc, wc + dim_, Complex{0.0, 0.0});
            for (const Entry& e : v_entries_) {
                wc[e.row] += e.val * rc[e.col];
            }
        }
        const Complex* w = work.data();
        for (Eigen::Index c = 0; c < dim_; ++c) {
            const double nc = photon_[c];
            const double sc = 2.0 * lambda_ * shift_scale_[c];
            const Complex* rho_c = rho.col(c).data();
            const Complex* rho_c1 = c + 1 < dim_ ? rho.col(c + 1).data() : nullptr;
            const Complex* vr_c = work.col(c).data();
            const Complex* w_row_c = w + c; // work(c, r) walked with stride dim_
            Complex* out_c = out.col(c).data();
            for (Eigen::Index r = 0; r < dim_; ++r) {
                const Complex vrho = vr_c[r];
                const Complex rhov = std::conj(w_row_c[r * dim_]);
                // -i * (V rho - rho V), written by components
                Complex val(vrho.imag() - rhov.imag(), rhov.real() - vrho.real());
                val -= lambda_ * (photon_[r] + nc) * rho_c[r];
                if (rho_c1 != nullptr && r + 1 < dim_ && shift_scale_[r] != 0.0 && sc != 0.0) {
                    val += sc * shift_scale_[r] * rho_c1[r + 1];
                }
                out_c[r] = val;
            }
        }
    }

    double pseudomode_occupation(const Matrix& rho) const {
        double acc = 0.0;
        for (Eigen::Index r = 0; r < dim_; ++r) acc += photon_[r] * rho(r, r).real();
        return acc;
    }

private:
    struct Entry {
        Eigen::Index row;
        Eigen::Index col;
        Complex val;
    };

    double lambda_;
    Eigen::Index pdim_;
    Eigen::Index dim_;
    std::vector<Entry> v_entries_;
    Eigen::VectorXd photon_;
    Eigen::VectorXd shift_scale_;
};

} // namespace

IntegratorConfig IntegratorConfig::defaults(const ModelSpec& spec, double t_max_lambda) {
    IntegratorConfig cfg;
    cfg.dt = 0.002 / std::max(1.0, spec.coupling_ratio());
    cfg.t_max = t_max_lambda;
    const double steps = t_max_lambda / cfg.dt;
    cfg.record_stride = std::max(1, static_cast<int>(steps / 4000.0));
    return cfg;
}

double IntegratorConfig::max_stable_dt(const ModelSpec& spec) {
    const double scale = spec.coupling_ratio() * std::sqrt(static_cast<double>(spec.num_qubits()));
    return 0.01 / std::max(1.0, scale);
}

void IntegratorConfig::validate(const ModelSpec& spec) const {
    if (!(dt > 0.0)) throw ValidationError("integrator dt must be positive");
    if (!(t_max > 0.0)) throw ValidationError("integrator t_max must be positive");
    if (record_stride < 1) throw ValidationError("record_stride must be >= 1");
    const double bound = max_stable_dt(spec);
    if (dt > bound * (1.0 + 1e-12)) {
        throw NumericsError("integrator dt = " + std::to_string(dt) +
                            " exceeds the stability bound " + std::to_string(bound) +
                            " for R = " + std::to_string(spec.coupling_ratio()));
    }
}

Matrix lindblad_rhs(const Matrix& varrho, const Matrix& v, double lambda, const Matrix& a) {
    if (varrho.rows() != varrho.cols()) throw DimensionError("lindblad_rhs: state not square");
    if (v.rows() != varrho.rows() || v.cols() != varrho.cols() || a.rows() != varrho.rows() ||
        a.cols() != varrho.cols()) {
        throw DimensionError("lindblad_rhs: operator dimensions do not match the state");
    }
    const Complex i(0.0, 1.0);
    const Matrix n = a.adjoint() * a;
    return -i * (v * varrho - varrho * v) +
           lambda * (2.0 * a * varrho * a.adjoint() - n * varrho - varrho * n);
}

Trajectory evolve(const ModelSpec& spec, const ScenarioSpec& scen, const IntegratorConfig& cfg) {
    validate_scenario(spec, scen);
    cfg.validate(spec);

    const Generator gen(spec);
    const HilbertLayout layout = extended_layout(spec);
    const std::vector<std::size_t> keep_battery = battery_indices(spec);
    const std::vector<std::size_t> keep_charger = charger_indices(spec);
    const ErgotropyEvaluator battery_eval(battery_hamiltonian(spec));
    const ErgotropyEvaluator charger_eval(charger_hamiltonian(spec));
    const double omega0 = spec.omega0;

    Matrix rho = build_initial_state(spec, scen);

    const double dt_phys = cfg.dt / spec.lambda;
    const auto num_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));

    Trajectory traj;
    traj.model = spec;
    traj.scenario = scen;
    traj.integrator = cfg;
    const std::size_t reserve = static_cast<std::size_t>(num_steps / cfg.record_stride) + 2;
    traj.times.reserve(reserve);
    traj.battery_states.reserve(reserve);
    traj.charger_states.reserve(reserve);
    traj.battery.reserve(reserve);
    traj.charger.reserve(reserve);
    traj.pseudomode_occupation.reserve(reserve);

    const Eigen::Index d = gen.dim();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d), work(d, d);

    auto record = [&](long step) {
        const double lambda_t = static_cast<double>(step) * cfg.dt;
        const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_dev > kTraceAbortTol) {
            throw NumericsError("evolve: trace deviated by " + std::to_string(trace_dev) +
                                " at lambda*t = " + std::to_string(lambda_t));
        }
        Matrix rho_ba = partial_trace(rho, layout, keep_battery);
        Matrix rho_ch = partial_trace(rho, layout, keep_charger);
        ErgotropyBreakdown ba;
        ErgotropyBreakdown ch;
        try {
            ba = in_omega0_units(battery_eval.breakdown(rho_ba), omega0);
            ch = in_omega0_units(charger_eval.breakdown(rho_ch), omega0);
        } catch (const ValidationError& e) {
            throw NumericsError("evolve: reduced state failed physicality checks at lambda*t = " +
                                std::to_string(lambda_t) + ": " + e.what());
        }

        traj.times.push_back(lambda_t);
        traj.battery_states.push_back(std::move(rho_ba));
        traj.charger_states.push_back(std::move(rho_ch));
        traj.battery.push_back(ba);
        traj.charger.push_back(ch);
        traj.pseudomode_occupation.push_back(gen.pseudomode_occupation(rho));
        traj.final_trace_deviation = trace_dev;
    };

    record(0);
    for (long step = 1; step <= num_steps; ++step) {
        gen.apply(rho, k1, work);
        stage = rho + (0.5 * dt_phys) * k1;
        gen.apply(stage, k2, work);
        stage = rho + (0.5 * dt_phys) * k2;
        gen.apply(stage, k3, work);
        stage = rho + dt_phys * k3;
        gen.apply(stage, k4, work);
        rho += (dt_phys / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (step % cfg.record_stride == 0 || step == num_steps) record(step);
    }
    return traj;
}

double max_rotating_frame_deviation(const Trajectory& traj) {
    const Matrix h_ba = battery_hamiltonian(traj.model);
    const Matrix h_ch = charger_hamiltonian(traj.model);
    const ErgotropyEvaluator battery_eval(h_ba);
    const ErgotropyEvaluator charger_eval(h_ch);
    const double omega0 = traj.model.omega0;
    const Complex i(0.0, 1.0);

    auto frame_phases = [&](const Matrix& h, double t_phys) {
        Vector phases(h.rows());
        for (Eigen::Index k = 0; k < h.rows(); ++k) {
            phases[k] = std::exp(-i * h(k, k) * t_phys);
        }
        return phases;
    };

    auto breakdown_gap = [](const ErgotropyBreakdown& a, const ErgotropyBreakdown& b) {
        return std::max({std::abs(a.total - b.total), std::abs(a.incoherent - b.incoherent),
                         std::abs(a.coherent - b.coherent),
                         std::abs(a.mean_energy - b.mean_energy)});
    };

    double worst = 0.0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const double t_phys = traj.times[s] / traj.model.lambda;
        const Vector ub = frame_phases(h_ba, t_phys);
        const Vector uc = frame_phases(h_ch, t_phys);
        const Matrix rho_ba = ub.asDiagonal() * traj.battery_states[s] *
                              ub.conjugate().asDiagonal();
        const Matrix rho_ch = uc.asDiagonal() * traj.charger_states[s] *
                              uc.conjugate().asDiagonal();
        const ErgotropyBreakdown ba = in_omega0_units(battery_eval.breakdown(rho_ba), omega0);
        const ErgotropyBreakdown ch = in_omega0_units(charger_eval.breakdown(rho_ch), omega0);
        worst = std::max(worst, breakdown_gap(ba, traj.battery[s]));
        worst = std::max(worst, breakdown_gap(ch, traj.charger[s]));
    }
    return worst;
}

} // namespace qbat
