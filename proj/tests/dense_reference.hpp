// dense_reference.hpp: element-wise dense Hamiltonian and helpers used as test oracles.

#pragma once

#include "qcd/basis.hpp"
#include "qcd/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace testref {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline std::size_t flat(std::size_t n_spins, std::size_t k, std::size_t n_boson) { return n_boson * (n_spins + 1) + k; }

// H written out entry by entry in the |n_boson, m> basis with m = k - N/2:
//   <n,m|H|n,m>       = w0 n + eps m - (J/N)(s(s+1) - m^2)
//   <n,m+-2|H|n,m>    = (J/2N) sqrt(s(s+1) - m(m+-1)) sqrt(s(s+1) - (m+-1)(m+-1+1 or -1))
//   <n+-1,m+-1|H|n,m> = (lambda/sqrt N) sqrt(boson) sqrt(spin ladder)
// using S_y^2 = (S^2 - S_z^2)/2 - (S+^2 + S-^2)/4.
inline Mat hamiltonian(std::size_t n_spins, std::size_t cutoff, const qcd::ModelParams& p) {
    const double s = 0.5 * static_cast<double>(n_spins);
    const double nn = static_cast<double>(n_spins);
    const std::size_t d = (n_spins + 1) * (cutoff + 1);
    Mat h = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    auto plus = [s](double m) { return std::sqrt(s * (s + 1.0) - m * (m + 1.0)); };  // <m+1|S+|m>
    auto minus = [s](double m) { return std::sqrt(s * (s + 1.0) - m * (m - 1.0)); }; // <m-1|S-|m>
    auto at = [&](std::size_t r, std::size_t c) -> double& { return h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)); };
    for (std::size_t nb = 0; nb <= cutoff; ++nb) {
        for (std::size_t k = 0; k <= n_spins; ++k) {
            const double m = static_cast<double>(k) - s;
            const std::size_t col = flat(n_spins, k, nb);
            at(col, col) += p.omega0 * static_cast<double>(nb) + p.epsilon * m -
                            (2.0 * p.j_coupling / nn) * 0.5 * (s * (s + 1.0) - m * m);
            if (k + 2 <= n_spins) at(flat(n_spins, k + 2, nb), col) += (2.0 * p.j_coupling / nn) * 0.25 * plus(m + 1.0) * plus(m);
            if (k >= 2) at(flat(n_spins, k - 2, nb), col) += (2.0 * p.j_coupling / nn) * 0.25 * minus(m - 1.0) * minus(m);
            const double g = p.lambda / std::sqrt(nn); // (2 lambda / sqrt N) * (1/2) from S_x
            for (int db : {-1, 1}) {
                if (db < 0 && nb == 0) continue;
                if (db > 0 && nb == cutoff) continue;
                const std::size_t nb2 = db > 0 ? nb + 1 : nb - 1;
                const double boson = std::sqrt(static_cast<double>(db > 0 ? nb + 1 : nb));
                if (k + 1 <= n_spins) at(flat(n_spins, k + 1, nb2), col) += g * boson * plus(m);
                if (k >= 1) at(flat(n_spins, k - 1, nb2), col) += g * boson * minus(m);
            }
        }
    }
    return h;
}

struct Eigen0 {
    double energy;
    Vec state;
};

// Lowest eigenpair within the parity sector `sign` (+1 even, -1 odd), embedded.
inline Eigen0 sector_ground(const Mat& h, std::size_t n_spins, int sign) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const auto k = static_cast<std::size_t>(i) % (n_spins + 1);
        const auto nb = static_cast<std::size_t>(i) / (n_spins + 1);
        if (((k + nb) % 2 == 0 ? 1 : -1) == sign) idx.push_back(i);
    }
    Mat b(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Mat> es(b);
    Vec v = Vec::Zero(h.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = es.eigenvectors()(static_cast<Eigen::Index>(i), 0);
    return {es.eigenvalues()(0), v};
}

inline double lowest(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// <n> and Var n of a real state in the flat basis.
inline std::array<double, 2> boson_moments(const Vec& v, std::size_t n_spins) {
    double w = 0.0, n1 = 0.0, n2 = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double nb = static_cast<double>(static_cast<std::size_t>(i) / (n_spins + 1));
        const double a = v(i) * v(i);
        w += a;
        n1 += a * nb;
        n2 += a * nb * nb;
    }
    n1 /= w;
    n2 /= w;
    return {n1, n2 - n1 * n1};
}

inline Eigen::VectorXcd to_complex(const Vec& v) { return v.cast<std::complex<double>>(); }

} // namespace testref
