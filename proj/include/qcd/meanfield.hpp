// meanfield.hpp: product-ansatz energy |sqrt(N) alpha> (x) |theta, phi>, its minimizer and the
// analytic phase diagram.
//
//   e = omega0 |alpha|^2 + 2 lambda Re(alpha) sin(theta) cos(phi) + (epsilon/2) cos(theta)
//       - (J/2) sin^2(theta) sin^2(phi)
//
// Leading order in N; O(1/N) corrections of <S_y^2> are dropped.

#pragma once

#include "qcd/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qcd {

enum class Phase { PN, FN, FS };

inline std::string phase_name(Phase p) {
    switch (p) {
    case Phase::PN: return "PN";
    case Phase::FN: return "FN";
    case Phase::FS: return "FS";
    }
    return "?";
}

struct MeanFieldPoint {
    std::complex<double> alpha{0.0, 0.0};
    double theta{M_PI};
    double phi{0.0};
};

struct MeanFieldSolution {
    std::complex<double> alpha{0.0, 0.0};
    double theta{M_PI};
    double phi{0.0};
    double energy_per_spin{0.0};
    Phase phase{Phase::PN};
    std::optional<MeanFieldPoint> degenerate_partner;
    std::size_t iterations{0};

    // Order parameters predicted at N -> infinity.
    double zeta_S() const { return std::norm(alpha); }
    double zeta_My() const {
        const double s = std::sin(theta) * std::sin(phi);
        return 0.25 * s * s;
    }
    double zeta_Mx() const {
        const double s = std::sin(theta) * std::cos(phi);
        return 0.25 * s * s;
    }
    double m_z() const { return 0.5 * std::cos(theta); }
};

inline double energy_per_spin(const ModelParams& p, std::complex<double> alpha, double theta, double phi) {
    const double st = std::sin(theta);
    const double sp = std::sin(phi);
    return p.omega0 * std::norm(alpha) + 2.0 * p.lambda * alpha.real() * st * std::cos(phi) +
           0.5 * p.epsilon * std::cos(theta) - 0.5 * p.j_coupling * st * st * sp * sp;
}

struct PhaseBoundaries {
    double lambda_c2{0.5};   // PN-FS second-order line
    double j_c2{0.5};        // PN-FN second-order line
    double omega0{1.0};

    double lambda_c1(double j) const { return std::sqrt(0.5 * j * omega0); } // first-order line J = 2 lambda^2 / omega0
    double first_order_j(double lambda) const { return 2.0 * lambda * lambda / omega0; }
    std::array<double, 2> triple_point() const { return {lambda_c2, j_c2}; }
};

inline PhaseBoundaries phase_boundaries(const ModelParams& p) {
    p.validate();
    return {0.5 * std::sqrt(p.epsilon * p.omega0), 0.5 * p.epsilon, p.omega0};
}

// Closed-form stationary branches (valid where the branch exists).
struct BranchValue {
    bool exists{false};
    double cos_theta{-1.0};
    double energy{0.0};
};

inline BranchValue fs_branch(const ModelParams& p) {
    const double c = -p.epsilon * p.omega0 / (4.0 * p.lambda * p.lambda);
    if (!(p.lambda > 0.0) || c <= -1.0) return {false, -1.0, -0.5 * p.epsilon};
    const double l2 = p.lambda * p.lambda / p.omega0;
    return {true, c, -l2 - p.epsilon * p.epsilon * p.omega0 / (16.0 * p.lambda * p.lambda)};
}

inline BranchValue fn_branch(const ModelParams& p) {
    if (!(p.j_coupling > 0.0)) return {false, -1.0, -0.5 * p.epsilon};
    const double c = -p.epsilon / (2.0 * p.j_coupling);
    if (c <= -1.0) return {false, -1.0, -0.5 * p.epsilon};
    return {true, c, -0.5 * p.j_coupling - p.epsilon * p.epsilon / (8.0 * p.j_coupling)};
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
    std::string label;                // "PN", "FN", "FS", "PN-FS", "PN-FN", "FN-FS" or "triple"
    std::optional<Phase> phase;       // empty on a boundary
    double distance_lambda_c2{0.0};   // lambda - lambda_c2
    double distance_j_c2{0.0};        // J - J_c2
    double distance_first_order{0.0}; // J - 2 lambda^2 / omega0
};

// Analytic stability conditions. Points within `tol` of a line get the line's name.
inline Classification classify(const ModelParams& p, double tol = 1e-9) {
    const PhaseBoundaries b = phase_boundaries(p);
    Classification c;
    c.distance_lambda_c2 = p.lambda - b.lambda_c2;
    c.distance_j_c2 = p.j_coupling - b.j_c2;
    c.distance_first_order = p.j_coupling - b.first_order_j(p.lambda);
    const bool on_l = std::abs(c.distance_lambda_c2) <= tol;
    const bool on_j = std::abs(c.distance_j_c2) <= tol;
    const bool on_f = std::abs(c.distance_first_order) <= tol;
    if (on_l && on_j) {
        c.label = "triple";
    } else if (on_l && p.j_coupling < b.j_c2) {
        c.label = "PN-FS";
    } else if (on_j && p.lambda < b.lambda_c2) {
        c.label = "PN-FN";
    } else if (on_f && p.lambda > b.lambda_c2) {
        c.label = "FN-FS";
    } else if (p.lambda < b.lambda_c2 && p.j_coupling < b.j_c2) {
        c.phase = Phase::PN;
    } else if (p.j_coupling > b.j_c2 && p.j_coupling > b.first_order_j(p.lambda)) {
        c.phase = Phase::FN;
    } else {
        c.phase = Phase::FS;
    }
    if (c.phase) c.label = phase_name(*c.phase);
    return c;
}

// ---------------------------------------------------------------------------
// Numerical minimization

namespace detail {

using Vec4 = std::array<double, 4>; // Re alpha, Im alpha, theta, phi

inline double mf_energy(const ModelParams& p, const Vec4& x) {
    return energy_per_spin(p, {x[0], x[1]}, x[2], x[3]);
}

inline Vec4 mf_gradient(const ModelParams& p, const Vec4& x) {
    const double st = std::sin(x[2]), ct = std::cos(x[2]);
    const double sp = std::sin(x[3]), cp = std::cos(x[3]);
    return {
        2.0 * p.omega0 * x[0] + 2.0 * p.lambda * st * cp,
        2.0 * p.omega0 * x[1],
        2.0 * p.lambda * x[0] * ct * cp - 0.5 * p.epsilon * st - p.j_coupling * st * ct * sp * sp,
        -2.0 * p.lambda * x[0] * st * sp - p.j_coupling * st * st * sp * cp,
    };
}

inline void canonicalize(Vec4& x) {
    const double two_pi = 2.0 * M_PI;
    x[2] = std::fmod(x[2], two_pi);
    if (x[2] < 0.0) x[2] += two_pi;
    if (x[2] > M_PI) {
        x[2] = two_pi - x[2];
        x[3] += M_PI;
    }
    x[3] = std::fmod(x[3], two_pi);
    if (x[3] < 0.0) x[3] += two_pi;
    if (x[3] >= two_pi) x[3] -= two_pi;
}

struct DescentResult {
    Vec4 x;
    double energy;
    std::size_t iterations;
};

// BFGS with Armijo backtracking; coordinates with free[i] == false stay fixed.
inline DescentResult bfgs(const ModelParams& p, Vec4 x, const std::array<bool, 4>& free, double gtol = 1e-13,
                          std::size_t max_iter = 2000) {
    auto masked_grad = [&](const Vec4& y) {
        Vec4 g = mf_gradient(p, y);
        for (int i = 0; i < 4; ++i)
            if (!free[static_cast<std::size_t>(i)]) g[static_cast<std::size_t>(i)] = 0.0;
        return g;
    };
    double hinv[4][4] = {};
    for (int i = 0; i < 4; ++i) hinv[i][i] = 1.0;
    double f = mf_energy(p, x);
    Vec4 g = masked_grad(x);
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        double gn = 0.0;
        for (double v : g) gn = std::max(gn, std::abs(v));
        if (gn < gtol) break;
        Vec4 d{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) d[static_cast<std::size_t>(i)] -= hinv[i][j] * g[static_cast<std::size_t>(j)];
        double slope = 0.0;
        for (int i = 0; i < 4; ++i) slope += d[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        if (slope >= 0.0) { // lost descent direction: reset to steepest descent
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) hinv[i][j] = i == j ? 1.0 : 0.0;
                d[static_cast<std::size_t>(i)] = -g[static_cast<std::size_t>(i)];
            }
            slope = 0.0;
            for (int i = 0; i < 4; ++i) slope -= g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        }
        double step = 1.0;
        Vec4 xn{};
        double fn = f;
        for (int k = 0; k < 60; ++k) {
            for (int i = 0; i < 4; ++i) xn[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + step * d[static_cast<std::size_t>(i)];
            fn = mf_energy(p, xn);
            if (fn <= f + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (!(fn <= f)) break; // no further decrease resolvable in double precision
        const Vec4 gn_vec = masked_grad(xn);
        Vec4 s{}, y{};
        for (int i = 0; i < 4; ++i) {
            s[static_cast<std::size_t>(i)] = xn[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = gn_vec[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
        }
        double sy = 0.0;
        for (int i = 0; i < 4; ++i) sy += s[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        if (sy > 1e-300) {
            double hy[4] = {};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) hy[i] += hinv[i][j] * y[static_cast<std::size_t>(j)];
            double yhy = 0.0;
            for (int i = 0; i < 4; ++i) yhy += y[static_cast<std::size_t>(i)] * hy[i];
            const double rho = 1.0 / sy;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    hinv[i][j] += rho * ((1.0 + rho * yhy) * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)] -
                                         hy[i] * s[static_cast<std::size_t>(j)] - s[static_cast<std::size_t>(i)] * hy[j]);
        }
        x = xn;
        f = fn;
        g = gn_vec;
    }
    canonicalize(x);
    return {x, mf_energy(p, x), it};
}

inline Phase phase_of(const Vec4& x) {
    if (std::sin(x[2]) < 1e-6) return Phase::PN;
    if (std::abs(x[0]) > 1e-6) return Phase::FS;
    return Phase::FN;
}

} // namespace detail

enum class Branch { PN, FN, FS };

// Local descent from the branch's seed. FN and FS hold phi at pi/2 and 0 respectively,
// PN starts at the all-down point (a stationary point for every parameter set).
inline MeanFieldSolution minimize_branch(const ModelParams& p, Branch branch) {
    p.validate();
    detail::Vec4 seed{};
    std::array<bool, 4> free{true, true, true, false};
    switch (branch) {
    case Branch::PN: seed = {0.0, 0.0, M_PI, 0.0}; break;
    case Branch::FN: seed = {0.0, 0.0, 2.0 * M_PI / 3.0, 0.5 * M_PI}; break;
    case Branch::FS: seed = {-0.1, 0.0, 2.0 * M_PI / 3.0, 0.0}; break;
    }
    const auto r = detail::bfgs(p, seed, free);
    MeanFieldSolution s;
    s.alpha = {r.x[0], r.x[1]};
    s.theta = r.x[2];
    s.phi = r.x[3];
    s.energy_per_spin = r.energy;
    s.phase = detail::phase_of(r.x);
    s.iterations = r.iterations;
    return s;
}

// Global minimum: multi-start from the three branch seeds followed by an unconstrained polish.
inline MeanFieldSolution minimize(const ModelParams& p) {
    p.validate();
    MeanFieldSolution best;
    bool have = false;
    for (Branch b : {Branch::PN, Branch::FN, Branch::FS}) {
        const MeanFieldSolution cand = minimize_branch(p, b);
        const auto polished =
            detail::bfgs(p, {cand.alpha.real(), cand.alpha.imag(), cand.theta, cand.phi}, {true, true, true, true});
        if (!have || polished.energy < best.energy_per_spin - 1e-14) {
            best.alpha = {polished.x[0], polished.x[1]};
            best.theta = polished.x[2];
            best.phi = polished.x[3];
            best.energy_per_spin = polished.energy;
            best.phase = detail::phase_of(polished.x);
            best.iterations = cand.iterations + polished.iterations;
            have = true;
        }
    }
    // e(alpha, theta, phi) = e(-alpha, theta, phi + pi): ferromagnetic minima come in pairs.
    if (best.phase != Phase::PN) {
        MeanFieldPoint partner{-best.alpha, best.theta, std::fmod(best.phi + M_PI, 2.0 * M_PI)};
        if (std::abs(energy_per_spin(p, partner.alpha, partner.theta, partner.phi) - best.energy_per_spin) < 1e-12) {
            best.degenerate_partner = partner;
        }
    }
    return best;
}

// J at which the numerically minimized FN and FS branches cross, at fixed lambda.
// Bisection on e_FN(J) - e_FS(J) within [j_lo, j_hi].
inline double first_order_crossing_j(const ModelParams& p, double j_lo, double j_hi, double tol = 1e-12) {
    auto diff = [&](double j) {
        const ModelParams q = p.with_j(j);
        return minimize_branch(q, Branch::FN).energy_per_spin - minimize_branch(q, Branch::FS).energy_per_spin;
    };
    double flo = diff(j_lo);
    const double fhi = diff(j_hi);
    if (flo * fhi > 0.0) throw std::invalid_argument("first_order_crossing_j: bracket does not contain a crossing");
    while (j_hi - j_lo > tol) {
        const double mid = 0.5 * (j_lo + j_hi);
        const double fm = diff(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            j_lo = mid;
            flo = fm;
        } else {
            j_hi = mid;
        }
    }
    return 0.5 * (j_lo + j_hi);
}

} // namespace qcd
