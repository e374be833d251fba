// hamiltonian.hpp: Dicke model with an LMG-type S_y^2 interaction, static and quenched.
//
//   H = omega0 d^dagger d + (2 lambda / sqrt N) S_x (d + d^dagger) + epsilon S_z - (2 J / N) S_y^2
//
// Energies and times are in units of omega0 (default 1).

#pragma once

#include "qcd/basis.hpp"
#include "qcd/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qcd {

struct ModelParams {
    double epsilon{1.0};
    double lambda{0.0};
    double j_coupling{0.0};
    double omega0{1.0};

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("ModelParams: epsilon must be > 0");
        if (!(lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
        if (!(j_coupling >= 0.0)) throw std::invalid_argument("ModelParams: j_coupling must be >= 0");
        if (!(omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
    }

    ModelParams with_lambda(double l) const {
        ModelParams p = *this;
        p.lambda = l;
        return p;
    }
    ModelParams with_j(double j) const {
        ModelParams p = *this;
        p.j_coupling = j;
        return p;
    }
};

// ---------------------------------------------------------------------------
// Quench envelopes P_e(t) in [0, 1], P_e(0) = 0.

struct TanhRamp {
    double tau{10.0};
    double operator()(double t) const {
        const double th = std::tanh(t / tau);
        return th * th;
    }
};

struct ExpSaturation {
    double tau{10.0};
    double operator()(double t) const { return -std::expm1(-t / tau); }
};

// sin^2(pi t / 2 tau) up to t = tau, then held at 1.
struct Sin2Ramp {
    double tau{10.0};
    double operator()(double t) const {
        if (t >= tau) return 1.0;
        const double sn = std::sin(0.5 * M_PI * t / tau);
        return sn * sn;
    }
};

// Linear interpolation between samples; clamped outside the table.
class TabulatedEnvelope {
public:
    TabulatedEnvelope(std::vector<double> t, std::vector<double> p) : t_(std::move(t)), p_(std::move(p)) {
        if (t_.size() != p_.size() || t_.empty()) {
            throw std::invalid_argument("TabulatedEnvelope: need matching, non-empty t and P_e columns");
        }
        if (t_.front() < 0.0) throw std::invalid_argument("TabulatedEnvelope: negative time sample");
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i > 0 && !(t_[i] > t_[i - 1])) throw std::invalid_argument("TabulatedEnvelope: t must be strictly increasing");
            if (!(p_[i] >= 0.0 && p_[i] <= 1.0)) throw std::invalid_argument("TabulatedEnvelope: P_e outside [0, 1]");
        }
        if ((*this)(0.0) != 0.0) throw std::invalid_argument("TabulatedEnvelope: P_e(0) must be 0");
    }

    double operator()(double t) const {
        if (t <= t_.front()) return p_.front();
        if (t >= t_.back()) return p_.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
        const std::size_t lo = hi - 1;
        const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
        return p_[lo] + w * (p_[hi] - p_[lo]);
    }

    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return p_; }

private:
    std::vector<double> t_;
    std::vector<double> p_;
};

using Envelope = std::variant<TanhRamp, ExpSaturation, Sin2Ramp, TabulatedEnvelope>;

inline std::string envelope_name(const Envelope& env) {
    struct Visitor {
        std::string operator()(const TanhRamp&) const { return "tanh_ramp"; }
        std::string operator()(const ExpSaturation&) const { return "exp_saturation"; }
        std::string operator()(const Sin2Ramp&) const { return "sin2_ramp"; }
        std::string operator()(const TabulatedEnvelope&) const { return "tabulated"; }
    };
    return std::visit(Visitor{}, env);
}

inline Envelope make_envelope(const std::string& name, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("envelope time constant must be > 0");
    if (name == "tanh_ramp") return TanhRamp{tau};
    if (name == "exp_saturation") return ExpSaturation{tau};
    if (name == "sin2_ramp") return Sin2Ramp{tau};
    throw std::invalid_argument("unknown envelope '" + name + "' (tabulated envelopes are read from a file)");
}

// Two whitespace-separated columns "t P_e"; blank lines and '#' comments are skipped.
inline TabulatedEnvelope read_envelope_table(std::istream& in) {
    std::vector<double> t;
    std::vector<double> p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double a = 0.0;
        double b = 0.0;
        if (!(ls >> a)) continue;
        std::string rest;
        if (!(ls >> b) || (ls >> rest)) {
            throw std::invalid_argument("envelope table line " + std::to_string(lineno) + ": expected two columns");
        }
        t.push_back(a);
        p.push_back(b);
    }
    return TabulatedEnvelope(std::move(t), std::move(p));
}

inline TabulatedEnvelope read_envelope_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open envelope table '" + path + "'");
    return read_envelope_table(in);
}

// lambda(t) = lambda0 + delta_lambda * P_e(t)
struct QuenchProfile {
    double lambda0{0.0};
    double delta_lambda{0.0};
    Envelope envelope{TanhRamp{10.0}};

    double envelope_at(double t) const {
        if (t < 0.0) throw std::invalid_argument("QuenchProfile: negative time");
        return std::visit([t](const auto& e) { return e(t); }, envelope);
    }
};

inline double lambda_at(const QuenchProfile& profile, double t) {
    return profile.lambda0 + profile.delta_lambda * profile.envelope_at(t);
}

// ---------------------------------------------------------------------------
// Assembly

// H split as H_rest + lambda * H_coupling with H_coupling = (2/sqrt N) S_x (d + d^dagger).
struct HamiltonianParts {
    SparseOperator rest;
    SparseOperator coupling;

    SparseOperator at_lambda(double lambda) const {
        return linear_combination({{1.0, &rest}, {lambda, &coupling}});
    }
};

inline HamiltonianParts build_hamiltonian_parts(const BasisSpec& basis, const ModelParams& params) {
    params.validate();
    const double n = static_cast<double>(basis.n_spins());
    const SparseOperator number = boson_operator(basis, BosonKind::number);
    const SparseOperator sz = spin_operator(basis, SpinAxis::z);
    const SparseOperator sy2 = spin_y_squared(basis);
    const SparseOperator sxx = spin_x_boson_position(basis);
    HamiltonianParts parts{
        linear_combination({{params.omega0, &number}, {params.epsilon, &sz}, {-2.0 * params.j_coupling / n, &sy2}}),
        linear_combination({{2.0 / std::sqrt(n), &sxx}}),
    };
    return parts;
}

inline SparseOperator build_hamiltonian(const BasisSpec& basis, const ModelParams& params) {
    return build_hamiltonian_parts(basis, params).at_lambda(params.lambda);
}

// Time-dependent Hamiltonian: fixed sparse blocks plus the coupling schedule.
struct TimeDependentHamiltonian {
    HamiltonianParts parts;
    QuenchProfile profile;

    double lambda_at(double t) const { return qcd::lambda_at(profile, t); }
    SparseOperator at(double t) const { return parts.at_lambda(lambda_at(t)); }
};

inline TimeDependentHamiltonian build_time_dependent(const BasisSpec& basis, const ModelParams& params,
                                                     const QuenchProfile& profile) {
    params.with_lambda(profile.lambda0).validate();
    if (profile.lambda0 + profile.delta_lambda < 0.0) {
        throw std::invalid_argument("QuenchProfile: lambda(t) would become negative");
    }
    return {build_hamiltonian_parts(basis, params), profile};
}

} // namespace qcd
