// solver.hpp: ground states (Lanczos and dense reference) and time evolution under H(t).

#pragma once

#include "qcd/basis.hpp"
#include "qcd/hamiltonian.hpp"
#include "qcd/kernels.hpp"
#include "qcd/lanczos.hpp"
#include "qcd/sparse_operator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcd {

// Unit-norm amplitude vector.
class StateVector {
public:
    StateVector() = default;

    explicit StateVector(Eigen::VectorXcd amplitudes, double tol = 1e-10) : amp_(std::move(amplitudes)) {
        if (amp_.size() == 0) throw std::invalid_argument("StateVector: empty amplitude vector");
        if (std::abs(amp_.norm() - 1.0) > tol) {
            throw std::invalid_argument("StateVector: amplitudes are not normalized (norm " + std::to_string(amp_.norm()) + ")");
        }
    }

    static StateVector normalized(Eigen::VectorXcd amplitudes) {
        const double nrm = amplitudes.norm();
        if (!(nrm > 0.0)) throw std::invalid_argument("StateVector: zero vector cannot be normalized");
        amplitudes /= nrm;
        return StateVector(std::move(amplitudes));
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amp_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amp_; }
    cplx operator[](std::size_t i) const { return amp_[static_cast<Eigen::Index>(i)]; }

    // |<this|other>|^2
    double fidelity(const StateVector& other) const {
        if (other.dim() != dim()) throw std::invalid_argument("StateVector::fidelity: dimension mismatch");
        return std::norm(amp_.dot(other.amp_));
    }

private:
    Eigen::VectorXcd amp_;
};

struct GroundState {
    double energy{0.0};
    StateVector state;
    double gap{0.0};                 // E1 - E0 (NaN if E1 was not resolved)
    double parity{0.0};              // <Pi>
    bool converged{false};
    double residual{0.0};            // ||H psi - E0 psi||
    std::size_t matvecs{0};
    double top_fock_population{0.0}; // weight on the two highest Fock levels
    bool cutoff_adequate{true};
};

inline constexpr double kCutoffPopulationLimit = 1e-6;

// Population of Fock levels n >= max(M - 1, 1).
inline double top_fock_population(const BasisSpec& basis, const Eigen::VectorXcd& psi) {
    const std::size_t first = std::max<std::size_t>(basis.fock_cutoff() >= 1 ? basis.fock_cutoff() - 1 : 1, 1);
    double pop = 0.0;
    for (std::size_t k = first * basis.spin_dim(); k < basis.dim(); ++k) pop += std::norm(psi[static_cast<Eigen::Index>(k)]);
    return pop;
}

inline double parity_expectation(const BasisSpec& basis, const Eigen::VectorXcd& psi) {
    double acc = 0.0;
    for (std::size_t k = 0; k < basis.dim(); ++k) acc += parity_sign(basis, k) * std::norm(psi[static_cast<Eigen::Index>(k)]);
    return acc;
}

struct SolverOptions {
    double tol{1e-10};
    std::size_t max_iter{20000}; // matrix-vector products
    std::size_t krylov_dim{300};
};

namespace detail {

// Diagonal +-1 operator commuting with h; returns its diagonal.
inline std::vector<double> checked_parity_diagonal(const SparseOperator& h, const SparseOperator& parity) {
    if (parity.dim() != h.dim()) throw std::invalid_argument("parity operator dimension mismatch");
    std::vector<double> diag(parity.dim(), 0.0);
    for (const auto& e : parity.entries()) {
        if (e.row != e.col) throw std::invalid_argument("parity operator must be diagonal");
        if (std::abs(std::abs(e.value) - 1.0) > 1e-12 || e.value.imag() != 0.0) {
            throw std::invalid_argument("parity operator entries must be +-1");
        }
        diag[e.row] = e.value.real();
    }
    for (double d : diag) {
        if (d == 0.0) throw std::invalid_argument("parity operator must be diagonal with +-1 entries");
    }
    for (const auto& e : h.entries()) {
        if (std::abs(e.value) * std::abs(diag[e.row] - diag[e.col]) > 1e-10) {
            throw std::invalid_argument("Hamiltonian does not commute with the parity operator");
        }
    }
    return diag;
}

inline GroundState finish_ground_state(const BasisSpec* basis, const SparseOperator& h,
                                       const LanczosResult<double>& lr) {
    GroundState gs;
    gs.energy = lr.value0;
    gs.state = StateVector::normalized(lr.vector0.cast<cplx>());
    gs.gap = lr.value1 - lr.value0;
    gs.converged = lr.converged;
    gs.residual = lr.residual0;
    gs.matvecs = lr.matvecs;
    if (basis) {
        gs.parity = parity_expectation(*basis, gs.state.amplitudes());
        gs.top_fock_population = top_fock_population(*basis, gs.state.amplitudes());
        gs.cutoff_adequate = gs.top_fock_population < kCutoffPopulationLimit;
    }
    (void)h;
    return gs;
}

template <class Project>
GroundState run_ground_state(const SparseOperator& h, const BasisSpec* basis, const SolverOptions& opt, Project&& project) {
    if (!h.hermitian()) throw std::invalid_argument("ground_state: operator is not flagged Hermitian");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("ground_state: tol must be > 0");
    if (basis && basis->dim() != h.dim()) throw std::invalid_argument("ground_state: basis/operator dimension mismatch");
    const RealCsr csr(h);
    // Uniform start vector 1/sqrt(dim): reproducible and overlapping both parity sectors.
    const auto n = static_cast<Eigen::Index>(h.dim());
    Eigen::VectorXd start = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    LanczosOptions lo;
    lo.tol = opt.tol;
    lo.max_matvec = opt.max_iter;
    lo.krylov_dim = opt.krylov_dim;
    auto apply = [&csr](const Eigen::VectorXd& x, Eigen::VectorXd& y) { csr.apply(x, y); };
    const auto lr = lanczos_lowest<double>(apply, std::move(start), lo, std::forward<Project>(project));
    return finish_ground_state(basis, h, lr);
}

} // namespace detail

namespace detail {

inline bool commutes_with_parity(const SparseOperator& h, const BasisSpec& basis) {
    for (const auto& e : h.entries()) {
        if (e.value != 0.0 && parity_sign(basis, e.row) != parity_sign(basis, e.col)) return false;
    }
    return true;
}

inline GroundState sector_ground_state(const SparseOperator& h, const BasisSpec& basis, const SolverOptions& opt,
                                       double sector) {
    auto project = [&basis, sector](Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (parity_sign(basis, static_cast<std::size_t>(i)) != sector) v[i] = 0.0;
        }
    };
    return run_ground_state(h, &basis, opt, project);
}

} // namespace detail

// Lowest eigenpair of h. When h commutes with the parity Pi (every model Hamiltonian
// does) the two parity sectors are solved separately: near first-order crossings the
// even and odd ground doublets are nearly degenerate, which stalls a single Lanczos
// run. The returned state has definite parity (even on exact ties) and the gap is
// measured to the next level of either sector.
inline GroundState ground_state(const SparseOperator& h, const BasisSpec& basis, const SolverOptions& opt = {}) {
    if (basis.dim() != h.dim()) throw std::invalid_argument("ground_state: basis/operator dimension mismatch");
    if (basis.dim() < 4 || !detail::commutes_with_parity(h, basis)) {
        return detail::run_ground_state(h, &basis, opt, NoProjection{});
    }
    GroundState even = detail::sector_ground_state(h, basis, opt, 1.0);
    GroundState odd = detail::sector_ground_state(h, basis, opt, -1.0);
    const bool even_lower = even.energy <= odd.energy;
    GroundState& low = even_lower ? even : odd;
    const GroundState& high = even_lower ? odd : even;
    const double next_same = low.energy + low.gap; // NaN if the sector has a single state
    double e1 = high.energy;
    if (std::isfinite(next_same)) e1 = std::min(e1, next_same);
    GroundState out = std::move(low);
    out.gap = e1 - out.energy;
    out.converged = even.converged && odd.converged;
    out.matvecs = even.matvecs + odd.matvecs;
    return out;
}

// Basis-free form; parity and cutoff diagnostics are left at their defaults.
inline GroundState ground_state(const SparseOperator& h, double tol, std::size_t max_iter) {
    SolverOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return detail::run_ground_state(h, nullptr, opt, NoProjection{});
}

// Lowest state inside the +1 eigenspace of a diagonal parity operator. In the
// ferromagnetic phases this picks the symmetric combination of the two
// degenerate mean-field branches.
inline GroundState ground_state_even_parity(const SparseOperator& h, const SparseOperator& parity_op,
                                            const BasisSpec& basis, const SolverOptions& opt = {}) {
    const std::vector<double> diag = detail::checked_parity_diagonal(h, parity_op);
    auto project = [&diag](Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (diag[static_cast<std::size_t>(i)] < 0.0) v[i] = 0.0;
        }
    };
    GroundState gs = detail::run_ground_state(h, &basis, opt, project);
    gs.parity = 0.0;
    for (std::size_t k = 0; k < basis.dim(); ++k) gs.parity += diag[k] * std::norm(gs.state[k]);
    return gs;
}

// ---------------------------------------------------------------------------
// Dense reference

inline constexpr std::size_t kDenseOracleMaxDim = 4096;

struct Eigenpair {
    double energy{0.0};
    StateVector state;
};

inline std::vector<Eigenpair> dense_spectrum_oracle(const Eigen::MatrixXcd& h, std::size_t k) {
    if (static_cast<std::size_t>(h.rows()) > kDenseOracleMaxDim) {
        throw std::invalid_argument("dense_spectrum_oracle: dimension exceeds " + std::to_string(kDenseOracleMaxDim));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense_spectrum_oracle: eigensolver failed");
    std::vector<Eigenpair> out;
    const auto count = std::min<std::size_t>(k, static_cast<std::size_t>(h.rows()));
    for (std::size_t i = 0; i < count; ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        out.push_back({es.eigenvalues()(c), StateVector::normalized(es.eigenvectors().col(c))});
    }
    return out;
}

inline std::vector<Eigenpair> dense_spectrum_oracle(const SparseOperator& h, std::size_t k) {
    if (h.dim() > kDenseOracleMaxDim) {
        throw std::invalid_argument("dense_spectrum_oracle: dimension exceeds " + std::to_string(kDenseOracleMaxDim));
    }
    return dense_spectrum_oracle(h.to_dense(), k);
}

// ---------------------------------------------------------------------------
// Time evolution

enum class Integrator { rk4, krylov_expm };

struct EvolutionConfig {
    double t_final{0.0};
    double dt{0.005};            // upper bound; the grid is t_final / ceil(t_final / dt)
    Integrator method{Integrator::rk4};
    std::size_t record_stride{1};
    // Energy subtracted from H during propagation (a pure global phase).
    // Defaults to <psi0|H(0)|psi0>, which keeps the RK4 phase error small.
    std::optional<double> energy_reference{};
    double krylov_tol{1e-12};
    std::size_t krylov_dim{40};
    double norm_abort{1e-6};

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("EvolutionConfig: dt must be > 0");
        if (!(t_final >= 0.0)) throw std::invalid_argument("EvolutionConfig: t_final must be >= 0");
        if (record_stride < 1) throw std::invalid_argument("EvolutionConfig: record_stride must be >= 1");
    }

    std::size_t steps() const { return t_final == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9)); }
};

struct EvolutionSample {
    std::size_t step{0};
    double t{0.0};
    double lambda{0.0};
    double norm_drift{0.0}; // | ||psi|| - 1 |
};

class EvolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrates i d|psi>/dt = H(t)|psi> and calls observer(sample, psi) on the
// recorded grid (every record_stride steps plus the final step). The norm is
// monitored, never renormalized; drift beyond cfg.norm_abort throws EvolutionError.
template <class Observer>
void evolve_observed(const TimeDependentHamiltonian& h, const StateVector& psi0, const EvolutionConfig& cfg,
                     Observer&& observer) {
    cfg.validate();
    if (psi0.dim() != h.parts.rest.dim()) throw std::invalid_argument("evolve: state/Hamiltonian dimension mismatch");
    const PairedRealCsr op(h.parts.rest, h.parts.coupling);
    const std::size_t steps = cfg.steps();
    const double dt = steps == 0 ? 0.0 : cfg.t_final / static_cast<double>(steps);

    Eigen::VectorXcd psi = psi0.amplitudes();
    Eigen::VectorXcd tmp(psi.size());
    const double shift = cfg.energy_reference.value_or([&] {
        op.apply(1.0, h.lambda_at(0.0), 0.0, psi, tmp);
        return std::real(psi.dot(tmp));
    }());

    auto record = [&](std::size_t k) {
        const double t = static_cast<double>(k) * dt;
        const double drift = std::abs(psi.norm() - 1.0);
        if (drift > cfg.norm_abort) {
            std::ostringstream msg;
            msg << "evolve: norm drift " << drift << " at t=" << t << " exceeds " << cfg.norm_abort
                << " (dt=" << dt << "); reduce dt or switch integrator";
            throw EvolutionError(msg.str());
        }
        observer(EvolutionSample{k, t, h.lambda_at(t), drift}, static_cast<const Eigen::VectorXcd&>(psi));
    };

    record(0);
    if (steps == 0) return;

    // -i (H(t) - shift) x
    auto rhs = [&](double lam, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
        op.apply(1.0, lam, shift, x, y);
        y *= cplx(0.0, -1.0);
    };

    Eigen::VectorXcd k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size());
    // Two-exponential commutator-free Magnus scheme (4th order) at the Gauss points.
    const double gauss_lo = 0.5 - std::sqrt(3.0) / 6.0;
    const double gauss_hi = 0.5 + std::sqrt(3.0) / 6.0;
    const double cf_a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
    const double cf_a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (cfg.method == Integrator::rk4) {
            const double l0 = h.lambda_at(t);
            const double lm = h.lambda_at(t + 0.5 * dt);
            const double l1 = h.lambda_at(t + dt);
            rhs(l0, psi, k1);
            tmp = psi + (0.5 * dt) * k1;
            rhs(lm, tmp, k2);
            tmp = psi + (0.5 * dt) * k2;
            rhs(lm, tmp, k3);
            tmp = psi + dt * k3;
            rhs(l1, tmp, k4);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            const double la = h.lambda_at(t + gauss_lo * dt);
            const double lb = h.lambda_at(t + gauss_hi * dt);
            // exp(-i dt (a1 H_a + a2 H_b)) then exp(-i dt (a2 H_a + a1 H_b)), applied right to left
            const double first = cf_a2 * la + cf_a1 * lb;
            const double second = cf_a1 * la + cf_a2 * lb;
            auto apply_first = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(0.5, first, 0.5 * shift, x, y); };
            auto apply_second = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(0.5, second, 0.5 * shift, x, y); };
            krylov_expm_apply(apply_first, dt, psi, cfg.krylov_tol, static_cast<Eigen::Index>(cfg.krylov_dim));
            krylov_expm_apply(apply_second, dt, psi, cfg.krylov_tol, static_cast<Eigen::Index>(cfg.krylov_dim));
        }
        if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) record(k + 1);
    }
}

struct TrajectoryPoint {
    EvolutionSample sample;
    StateVector state;
};

// Sampled trajectory. Snapshots keep the propagated amplitudes as they are; the norm drift is part of each sample.
inline std::vector<TrajectoryPoint> evolve(const TimeDependentHamiltonian& h, const StateVector& psi0,
                                           const EvolutionConfig& cfg) {
    std::vector<TrajectoryPoint> out;
    evolve_observed(h, psi0, cfg, [&out](const EvolutionSample& s, const Eigen::VectorXcd& psi) {
        out.push_back({s, StateVector(psi, 1e-6)});
    });
    return out;
}

} // namespace qcd
