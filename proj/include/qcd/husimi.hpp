// husimi.hpp: Husimi Q-functions of a pure state on the spin (x) boson space.
//
//   boson: Q(alpha)      = (1/pi) sum_m |<alpha, m|psi>|^2
//   spin:  Q(theta, phi) = ((N+1)/4pi) sum_n |<theta, phi; n|psi>|^2
//
// The spin coherent state is |theta, phi> = exp{i theta (S_x sin phi - S_y cos phi)} |s, s>,
// whose Dicke components are
//   <s, m|theta, phi> = sqrt(C(2s, s+m)) cos^{s+m}(theta/2) sin^{s-m}(theta/2) e^{i (s-m) phi}.

#pragma once

#include "qcd/basis.hpp"
#include "qcd/parallel.hpp"
#include "qcd/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcd {

enum class QKind { boson, spin };

struct QFunctionGrid {
    QKind kind{QKind::boson};
    std::string axis0_name; // "re_alpha" or "theta"
    std::string axis1_name; // "im_alpha" or "phi"
    std::vector<double> axis0;
    std::vector<double> axis1;
    std::vector<double> values; // row-major: values[i0 * axis1.size() + i1]
    bool prefactor_included{true};
    double prefactor{0.0};
    // Boson grids reaching |alpha|^2 > M/2 sample coherent states the truncated
    // Fock space cannot represent faithfully. This is a warning, not a failure.
    bool beyond_cutoff_warning{false};

    double at(std::size_t i0, std::size_t i1) const { return values[i0 * axis1.size() + i1]; }
};

struct BosonGridSpec {
    double re_min{-3.0}, re_max{3.0};
    double im_min{-3.0}, im_max{3.0};
    std::size_t re_points{201}, im_points{201};

    // Square grid |Re alpha|, |Im alpha| <= half_width.
    static BosonGridSpec square(double half_width, std::size_t points = 201) {
        return {-half_width, half_width, -half_width, half_width, points, points};
    }

    // Default grid for cutoff M: half-width sqrt(M) + 3, wide enough to hold the FS peaks
    // and their tails so the integral stays within 1e-3 of one.
    static BosonGridSpec for_cutoff(std::size_t cutoff, std::size_t points = 201) {
        return square(std::sqrt(static_cast<double>(cutoff)) + 3.0, points);
    }
};

struct SpinGridSpec {
    std::size_t theta_points{181}; // theta in [0, pi], both poles included
    std::size_t phi_points{360};   // phi in [0, 2 pi), periodic
};

namespace detail {

inline std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("Q-function grid: need >= 2 points on an increasing range");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

inline void check_state(const StateVector& state, const BasisSpec& basis) {
    if (state.dim() != basis.dim()) throw std::invalid_argument("Q-function: state/basis dimension mismatch");
}

} // namespace detail

// <n|alpha> for n = 0..M, from log-domain magnitudes so large n and |alpha| do not overflow.
inline std::vector<std::complex<double>> coherent_amplitudes(std::complex<double> alpha, std::size_t cutoff) {
    std::vector<std::complex<double>> out(cutoff + 1);
    const double r = std::abs(alpha);
    const double arg = std::arg(alpha);
    const double base = -0.5 * r * r;
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double dn = static_cast<double>(n);
        if (r == 0.0) {
            out[n] = n == 0 ? 1.0 : 0.0;
            continue;
        }
        const double logmag = base + dn * std::log(r) - 0.5 * std::lgamma(dn + 1.0);
        out[n] = std::polar(std::exp(logmag), dn * arg);
    }
    return out;
}

// <s, m|theta, phi> for m_index = 0..N (m = m_index - s).
inline std::vector<std::complex<double>> spin_coherent_amplitudes(std::size_t n_spins, double theta, double phi) {
    const auto two_s = static_cast<double>(n_spins);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    std::vector<std::complex<double>> out(n_spins + 1);
    for (std::size_t i = 0; i <= n_spins; ++i) {
        const double up = static_cast<double>(i);   // s + m
        const double down = two_s - up;             // s - m
        const double binom = std::exp(0.5 * (std::lgamma(two_s + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0)));
        const double mag = binom * std::pow(c, up) * std::pow(s, down);
        out[i] = std::polar(1.0, down * phi) * mag;
    }
    return out;
}

inline QFunctionGrid boson_q(const StateVector& state, const BasisSpec& basis, const BosonGridSpec& spec = {},
                             std::size_t jobs = 1) {
    detail::check_state(state, basis);
    QFunctionGrid g;
    g.kind = QKind::boson;
    g.axis0_name = "re_alpha";
    g.axis1_name = "im_alpha";
    g.axis0 = detail::uniform_axis(spec.re_min, spec.re_max, spec.re_points);
    g.axis1 = detail::uniform_axis(spec.im_min, spec.im_max, spec.im_points);
    g.prefactor = 1.0 / M_PI;
    const double limit = 0.5 * static_cast<double>(basis.fock_cutoff());
    for (double x : {spec.re_min, spec.re_max})
        for (double y : {spec.im_min, spec.im_max})
            if (x * x + y * y > limit) g.beyond_cutoff_warning = true;

    const std::size_t ns = basis.spin_dim();
    const std::size_t nf = basis.fock_dim();
    const Eigen::VectorXcd& psi = state.amplitudes();
    const auto rows = parallel_map(g.axis0.size(), jobs, [&](std::size_t i) {
        std::vector<double> row(g.axis1.size());
        Eigen::VectorXcd acc(static_cast<Eigen::Index>(ns));
        for (std::size_t j = 0; j < g.axis1.size(); ++j) {
            const auto amp = coherent_amplitudes({g.axis0[i], g.axis1[j]}, basis.fock_cutoff());
            acc.setZero();
            for (std::size_t n = 0; n < nf; ++n) {
                acc += std::conj(amp[n]) * psi.segment(static_cast<Eigen::Index>(n * ns), static_cast<Eigen::Index>(ns));
            }
            row[j] = acc.squaredNorm() / M_PI;
        }
        return row;
    });
    g.values.reserve(g.axis0.size() * g.axis1.size());
    for (const auto& r : rows) g.values.insert(g.values.end(), r.begin(), r.end());
    return g;
}

inline QFunctionGrid spin_q(const StateVector& state, const BasisSpec& basis, const SpinGridSpec& spec = {},
                            std::size_t jobs = 1) {
    detail::check_state(state, basis);
    if (spec.theta_points < 2 || spec.phi_points < 1) throw std::invalid_argument("spin_q: grid too small");
    QFunctionGrid g;
    g.kind = QKind::spin;
    g.axis0_name = "theta";
    g.axis1_name = "phi";
    g.axis0 = detail::uniform_axis(0.0, M_PI, spec.theta_points);
    g.axis1.resize(spec.phi_points);
    for (std::size_t j = 0; j < spec.phi_points; ++j) g.axis1[j] = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(spec.phi_points);
    g.prefactor = static_cast<double>(basis.n_spins() + 1) / (4.0 * M_PI);

    const std::size_t ns = basis.spin_dim();
    const std::size_t nf = basis.fock_dim();
    const Eigen::Map<const Eigen::MatrixXcd> block(state.amplitudes().data(), static_cast<Eigen::Index>(ns),
                                                   static_cast<Eigen::Index>(nf)); // column n = spin block of Fock level n
    const auto rows = parallel_map(g.axis0.size(), jobs, [&](std::size_t i) {
        std::vector<double> row(g.axis1.size());
        Eigen::RowVectorXcd c(static_cast<Eigen::Index>(ns));
        for (std::size_t j = 0; j < g.axis1.size(); ++j) {
            const auto amp = spin_coherent_amplitudes(basis.n_spins(), g.axis0[i], g.axis1[j]);
            for (std::size_t m = 0; m < ns; ++m) c[static_cast<Eigen::Index>(m)] = std::conj(amp[m]);
            row[j] = g.prefactor * (c * block).squaredNorm();
        }
        return row;
    });
    g.values.reserve(g.axis0.size() * g.axis1.size());
    for (const auto& r : rows) g.values.insert(g.values.end(), r.begin(), r.end());
    return g;
}

namespace detail {

// Composite Simpson weights for an odd number of samples, trapezoid otherwise.
inline std::vector<double> quadrature_weights(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 0.0);
    const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
    if (n % 2 == 1 && n >= 3) {
        for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i + 1 == n) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    } else {
        for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    }
    return w;
}

} // namespace detail

// Integral of Q over the grid: d^2 alpha for boson grids, sin(theta) dtheta dphi for spin grids.
inline double normalization(const QFunctionGrid& g) {
    const std::vector<double> w0 = detail::quadrature_weights(g.axis0);
    std::vector<double> w1;
    if (g.kind == QKind::boson) {
        w1 = detail::quadrature_weights(g.axis1);
    } else {
        w1.assign(g.axis1.size(), 2.0 * M_PI / static_cast<double>(g.axis1.size())); // periodic trapezoid
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < g.axis0.size(); ++i) {
        const double jac = g.kind == QKind::spin ? std::sin(g.axis0[i]) : 1.0;
        double row = 0.0;
        for (std::size_t j = 0; j < g.axis1.size(); ++j) row += w1[j] * g.at(i, j);
        acc += w0[i] * jac * row;
    }
    return acc;
}

struct QPeak {
    double coord0{0.0};
    double coord1{0.0};
    double value{0.0};
};

// Strict local maxima over the 8-neighbourhood with values >= rel_floor * global max.
// Boson grids skip the border; spin grids wrap in phi and treat each pole row as one point.
inline std::vector<QPeak> local_maxima(const QFunctionGrid& g, double rel_floor = 1e-3) {
    const std::size_t n0 = g.axis0.size();
    const std::size_t n1 = g.axis1.size();
    double gmax = 0.0;
    for (double v : g.values) gmax = std::max(gmax, v);
    const double floor = rel_floor * gmax;
    std::vector<QPeak> out;
    if (g.kind == QKind::boson) {
        for (std::size_t i = 1; i + 1 < n0; ++i) {
            for (std::size_t j = 1; j + 1 < n1; ++j) {
                const double v = g.at(i, j);
                if (v < floor) continue;
                bool peak = true;
                for (int di = -1; di <= 1 && peak; ++di)
                    for (int dj = -1; dj <= 1 && peak; ++dj)
                        if ((di || dj) && g.at(static_cast<std::size_t>(static_cast<long>(i) + di),
                                                static_cast<std::size_t>(static_cast<long>(j) + dj)) >= v)
                            peak = false;
                if (peak) out.push_back({g.axis0[i], g.axis1[j], v});
            }
        }
        return out;
    }
    // spin: rows 0 and n0-1 are the poles
    for (std::size_t pole : {std::size_t{0}, n0 - 1}) {
        const double v = g.at(pole, 0);
        const std::size_t ring = pole == 0 ? 1 : n0 - 2;
        bool peak = v >= floor;
        for (std::size_t j = 0; j < n1 && peak; ++j)
            if (g.at(ring, j) >= v) peak = false;
        if (peak) out.push_back({g.axis0[pole], 0.0, v});
    }
    for (std::size_t i = 1; i + 1 < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            const double v = g.at(i, j);
            if (v < floor) continue;
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di) {
                for (int dj = -1; dj <= 1 && peak; ++dj) {
                    if (!di && !dj) continue;
                    const auto ii = static_cast<std::size_t>(static_cast<long>(i) + di);
                    const auto jj = static_cast<std::size_t>(static_cast<long>(j + n1) + dj) % n1;
                    const bool pole_row = ii == 0 || ii + 1 == n0;
                    if (g.at(ii, pole_row ? 0 : jj) >= v) peak = false;
                }
            }
            if (peak) out.push_back({g.axis0[i], g.axis1[j], v});
        }
    }
    return out;
}

} // namespace qcd
