// lanczos.hpp: Lanczos iterations for Hermitian operators given as matrix-vector callbacks.
//
//   lanczos_lowest     lowest two eigenpairs, full reorthogonalization, explicit restarts
//   krylov_expm_apply  exp(-i tau A) x on a Krylov subspace with an a-posteriori error bound

#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcd {

struct TridiagonalPairs {
    std::vector<double> values;
    Eigen::MatrixXd vectors; // column k is the k-th lowest eigenvector
};

// Lowest `count` eigenpairs of the symmetric tridiagonal matrix (diag, off).
inline TridiagonalPairs lowest_tridiagonal_pairs(const std::vector<double>& diag, const std::vector<double>& off,
                                                 int count) {
    const auto n = static_cast<lapack_int>(diag.size());
    count = std::min<int>(count, n);
    std::vector<double> d(diag);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy_n(off.begin(), std::min<std::size_t>(off.size(), static_cast<std::size_t>(n > 0 ? n - 1 : 0)), e.begin());
    lapack_int found = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    Eigen::MatrixXd z(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max(count, 1)));
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count, 0.0,
                                           &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != count) {
        throw std::runtime_error("lowest_tridiagonal_pairs: dstevr failed (info=" + std::to_string(info) + ")");
    }
    return {std::vector<double>(w.begin(), w.begin() + count), z};
}

struct LanczosOptions {
    double tol{1e-10};            // ||A y0 - theta0 y0|| target for the lowest pair
    double gap_tol{1e-6};         // residual target for the second pair (gap reporting)
    std::size_t max_matvec{20000};
    std::size_t krylov_dim{300};  // vectors kept before an explicit restart
    std::size_t check_interval{8};
};

template <class Scalar>
struct LanczosResult {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    double value0{std::numeric_limits<double>::quiet_NaN()};
    double value1{std::numeric_limits<double>::quiet_NaN()};
    Vector vector0;
    double residual0{std::numeric_limits<double>::infinity()};
    double residual1{std::numeric_limits<double>::infinity()}; // estimate from the tridiagonal
    bool converged{false};
    std::size_t matvecs{0};
    std::size_t restarts{0};
};

struct NoProjection {
    template <class V>
    void operator()(V&) const noexcept {}
};

// `apply(x, y)` computes y = A x. `project(v)` is applied to the start vector and
// every new Lanczos direction, restricting the iteration to an invariant subspace.
// The result is deterministic for a fixed start vector.
template <class Scalar, class MatVec, class Project = NoProjection>
LanczosResult<Scalar> lanczos_lowest(MatVec&& apply, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> start,
                                     const LanczosOptions& opt, Project&& project = {}) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = start.size();
    if (n == 0) throw std::invalid_argument("lanczos_lowest: empty start vector");

    project(start);
    double start_norm = start.norm();
    if (!(start_norm > 0.0)) throw std::invalid_argument("lanczos_lowest: start vector vanishes after projection");
    start /= start_norm;

    const Eigen::Index m_max = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max<std::size_t>(opt.krylov_dim, 2)), n);
    Matrix basis(n, m_max);
    Vector w(n);
    Vector vj(n);
    Vector coeff(m_max);
    Vector v = start;
    LanczosResult<Scalar> result;

    for (;;) {
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.col(0) = v;
        for (Eigen::Index j = 0;; ++j) {
            vj = basis.col(j);
            apply(vj, w);
            ++result.matvecs;
            const double a = std::real(vj.dot(w));
            w -= a * vj;
            if (j > 0) w -= beta.back() * basis.col(j - 1);
            // Classical Gram-Schmidt against the whole basis, repeated only when
            // cancellation removed most of w (DGKS criterion).
            for (int pass = 0; pass < 2; ++pass) {
                const double before = w.norm();
                coeff.head(j + 1).noalias() = basis.leftCols(j + 1).adjoint() * w;
                w.noalias() -= basis.leftCols(j + 1) * coeff.head(j + 1);
                if (w.norm() > 0.7071 * before) break;
            }
            project(w);
            const double b = w.norm();
            alpha.push_back(a);
            const Eigen::Index m = j + 1;

            double scale = 1.0;
            for (double x : alpha) scale = std::max(scale, std::abs(x));
            const bool breakdown = b <= 1e-13 * scale;
            const bool full = m == m_max;
            const bool budget = result.matvecs >= opt.max_matvec;
            if (breakdown || full || budget || static_cast<std::size_t>(m) % opt.check_interval == 0) {
                const auto pairs = lowest_tridiagonal_pairs(alpha, beta, 2);
                const double r0 = breakdown ? 0.0 : b * std::abs(pairs.vectors(m - 1, 0));
                const double r1 = m < 2 ? std::numeric_limits<double>::infinity()
                                        : (breakdown ? 0.0 : b * std::abs(pairs.vectors(m - 1, 1)));
                const bool estimate_done = r0 < 0.5 * opt.tol && (r1 < opt.gap_tol || (breakdown && m < 2));
                if (estimate_done || breakdown || full || budget) {
                    Vector y0 = basis.leftCols(m) * pairs.vectors.col(0).template cast<Scalar>();
                    y0 /= y0.norm();
                    apply(y0, w);
                    ++result.matvecs;
                    const double theta0 = pairs.values[0];
                    const double true_res = (w - theta0 * y0).norm();
                    result.value0 = theta0;
                    result.value1 = m > 1 ? pairs.values[1] : std::numeric_limits<double>::quiet_NaN();
                    result.residual0 = true_res;
                    result.residual1 = r1;
                    result.vector0 = y0;
                    if (true_res <= opt.tol) {
                        result.converged = true;
                        return result;
                    }
                    if (result.matvecs >= opt.max_matvec) return result;
                    // Restart from the lowest Ritz vector plus the second one so the gap stays resolved.
                    v = y0;
                    if (m > 1) {
                        Vector y1 = basis.leftCols(m) * pairs.vectors.col(1).template cast<Scalar>();
                        v += y1 / y1.norm();
                    }
                    project(v);
                    v /= v.norm();
                    ++result.restarts;
                    break;
                }
            }
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }
}

// x <- exp(-i tau A) x for Hermitian A. The Krylov space grows until the standard
// estimate beta_m |[exp(-i tau T) e_1]_m| * ||x|| drops below `tol`; if `max_dim`
// vectors do not suffice the step is split in two.
template <class MatVec>
void krylov_expm_apply(MatVec&& apply, double tau, Eigen::VectorXcd& x, double tol, Eigen::Index max_dim,
                       std::size_t* matvec_counter = nullptr, int depth = 0) {
    const Eigen::Index n = x.size();
    const double xnorm = x.norm();
    if (xnorm == 0.0 || tau == 0.0) return;
    const Eigen::Index m_max = std::min(max_dim, n);
    Eigen::MatrixXcd basis(n, m_max);
    basis.col(0) = x / xnorm;
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXcd w(n);
    Eigen::VectorXcd vj(n);
    for (Eigen::Index j = 0; j < m_max; ++j) {
        vj = basis.col(j);
        apply(vj, w);
        if (matvec_counter) ++*matvec_counter;
        const double a = std::real(vj.dot(w));
        w -= a * vj;
        if (j > 0) w -= beta.back() * basis.col(j - 1);
        const Eigen::VectorXcd coeff = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * coeff;
        const double b = w.norm();
        alpha.push_back(a);
        const Eigen::Index m = j + 1;

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const Eigen::VectorXcd phases =
            es.eigenvalues().unaryExpr([tau](double e) { return std::exp(std::complex<double>(0.0, -tau * e)); });
        const Eigen::VectorXcd u = es.eigenvectors().cast<std::complex<double>>() *
                                   phases.cwiseProduct(es.eigenvectors().row(0).transpose().cast<std::complex<double>>());
        const bool exhausted = b <= 1e-13 * std::max(1.0, std::abs(a));
        const double err = xnorm * b * std::abs(u(m - 1));
        if (exhausted || err < tol || m == n) {
            x = xnorm * (basis.leftCols(m) * u);
            return;
        }
        if (m == m_max) break;
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }
    if (depth > 30) throw std::runtime_error("krylov_expm_apply: step subdivision did not converge");
    krylov_expm_apply(apply, 0.5 * tau, x, 0.5 * tol, max_dim, matvec_counter, depth + 1);
    krylov_expm_apply(apply, 0.5 * tau, x, 0.5 * tol, max_dim, matvec_counter, depth + 1);
}

} // namespace qcd
