// observables.hpp: order parameters and boson-number moments of a single state.

#pragma once

#include "qcd/basis.hpp"
#include "qcd/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcd {

struct ObservableSet {
    double zeta_S{0.0};  // <d^dagger d> / N
    double zeta_Mx{0.0}; // <S_x^2> / N^2
    double zeta_My{0.0}; // <S_y^2> / N^2
    double m_z{0.0};     // <S_z> / N
    double n_mean{0.0};  // <d^dagger d>
    double n_var{0.0};   // <(d^dagger d)^2> - <d^dagger d>^2
    double sz2{0.0};     // <S_z^2> / N^2, closes the sum rule with zeta_Mx and zeta_My
};

struct BosonMoments {
    double n_mean{0.0};
    double n_var{0.0};
};

// <n> and Var(n); <n^2> is ||n psi||^2 so the variance cannot go negative beyond roundoff.
// The state need not be exactly normalized: moments are taken with respect to ||psi||^2.
inline BosonMoments boson_moments(const BasisSpec& basis, const Eigen::VectorXcd& psi) {
    if (static_cast<std::size_t>(psi.size()) != basis.dim()) throw std::invalid_argument("boson_moments: dimension mismatch");
    const std::size_t ns = basis.spin_dim();
    double w = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t nb = 0; nb < basis.fock_dim(); ++nb) {
        double block = 0.0;
        for (std::size_t i = 0; i < ns; ++i) block += std::norm(psi[static_cast<Eigen::Index>(nb * ns + i)]);
        const double n = static_cast<double>(nb);
        w += block;
        n1 += n * block;
        n2 += n * n * block;
    }
    n1 /= w;
    n2 /= w;
    return {n1, n2 - n1 * n1};
}

inline ObservableSet measure(const StateVector& state, const BasisSpec& basis) {
    if (state.dim() != basis.dim()) throw std::invalid_argument("measure: state/basis dimension mismatch");
    const Eigen::VectorXcd& psi = state.amplitudes();
    const double n = static_cast<double>(basis.n_spins());
    const double s = basis.total_spin();
    const std::size_t ns = basis.spin_dim();

    ObservableSet out;
    const BosonMoments bm = boson_moments(basis, psi);
    out.n_mean = bm.n_mean;
    out.n_var = bm.n_var;
    out.zeta_S = bm.n_mean / n;

    // <S_x^2> = ||S_x psi||^2, <S_y^2> = ||S_y psi||^2, evaluated block by block.
    double sx2 = 0.0, sy2 = 0.0, sz = 0.0, sz2 = 0.0;
    Eigen::VectorXcd up(ns), down(ns);
    for (std::size_t nb = 0; nb < basis.fock_dim(); ++nb) {
        const auto block = psi.segment(static_cast<Eigen::Index>(nb * ns), static_cast<Eigen::Index>(ns));
        up.setZero();
        down.setZero();
        for (std::size_t i = 0; i + 1 < ns; ++i) {
            const double a = detail::raising_coefficient(s, static_cast<double>(i) - s);
            up[static_cast<Eigen::Index>(i + 1)] = a * block[static_cast<Eigen::Index>(i)];   // S_+ psi
            down[static_cast<Eigen::Index>(i)] = a * block[static_cast<Eigen::Index>(i + 1)]; // S_- psi
        }
        sx2 += (0.5 * (up + down)).squaredNorm();
        sy2 += (0.5 * (up - down)).squaredNorm();
        for (std::size_t i = 0; i < ns; ++i) {
            const double m = static_cast<double>(i) - s;
            const double p = std::norm(block[static_cast<Eigen::Index>(i)]);
            sz += m * p;
            sz2 += m * m * p;
        }
    }
    out.zeta_Mx = sx2 / (n * n);
    out.zeta_My = sy2 / (n * n);
    out.m_z = sz / n;
    out.sz2 = sz2 / (n * n);
    return out;
}

inline constexpr double kGainFloor = 1e-12;
inline constexpr double kVarianceFloor = 1e-14;

struct GainValue {
    double value{1.0};    // n_t / n_0, or n_t itself when degenerate
    bool degenerate{false};
};

inline GainValue gain(double n_t, double n_0) {
    if (n_0 <= kGainFloor) return {n_t, true};
    return {n_t / n_0, false};
}

struct SqnrValue {
    double value{0.0};
    bool undefined{false};
};

inline SqnrValue sqnr(double n_mean, double n_var) {
    if (n_var <= kVarianceFloor) return {std::numeric_limits<double>::infinity(), true};
    return {n_mean * n_mean / n_var, false};
}

} // namespace qcd
