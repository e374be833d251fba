#include "qcd/husimi.hpp"
#include "qcd/solver.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace qcd;

namespace {

StateVector product_state(const BasisSpec& b, std::size_t m_index, std::size_t n_boson) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.dim()));
    v(static_cast<Eigen::Index>(b.index(m_index, n_boson))) = 1.0;
    return StateVector(v);
}

} // namespace

TEST(Husimi, CoherentAmplitudesMatchDisplacedVacuum) {
    const std::size_t m = 40;
    const std::complex<double> alpha(0.8, -0.6);
    // D(alpha)|0> with the truncated ladder; exact on the low Fock levels for a large cutoff.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    for (std::size_t n = 1; n <= m; ++n) a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
    const Eigen::VectorXcd ref = gen.exp().col(0);
    const auto amp = coherent_amplitudes(alpha, m);
    for (std::size_t n = 0; n <= 12; ++n) EXPECT_LT(std::abs(amp[n] - ref(static_cast<Eigen::Index>(n))), 1e-12) << n;
}

TEST(Husimi, SpinCoherentStateIsRotatedAllUpState) {
    const std::size_t n = 6;
    const BasisSpec b = make_basis(n, 0);
    const Eigen::MatrixXcd sp = spin_operator(b, SpinAxis::plus).to_dense();
    const Eigen::MatrixXcd sm = spin_operator(b, SpinAxis::minus).to_dense();
    for (auto [theta, phi] : {std::pair{0.7, 0.3}, std::pair{2.1, 4.0}, std::pair{M_PI, 0.0}}) {
        const std::complex<double> e(std::cos(phi), std::sin(phi));
        const Eigen::MatrixXcd gen = 0.5 * theta * (e * sm - std::conj(e) * sp);
        const Eigen::VectorXcd ref = gen.exp().col(static_cast<Eigen::Index>(n));
        const auto amp = spin_coherent_amplitudes(n, theta, phi);
        for (std::size_t k = 0; k <= n; ++k) EXPECT_LT(std::abs(amp[k] - ref(static_cast<Eigen::Index>(k))), 1e-12);
    }
}

TEST(Husimi, VacuumBosonQIsGaussian) {
    const BasisSpec b = make_basis(2, 40);
    const QFunctionGrid g = boson_q(product_state(b, 0, 0), b, BosonGridSpec::square(3.0, 61));
    for (std::size_t i = 0; i < g.axis0.size(); i += 7)
        for (std::size_t j = 0; j < g.axis1.size(); j += 5) {
            const double r2 = g.axis0[i] * g.axis0[i] + g.axis1[j] * g.axis1[j];
            EXPECT_NEAR(g.at(i, j), std::exp(-r2) / M_PI, 1e-14);
        }
    EXPECT_NEAR(normalization(g), 1.0, 1e-4); // mass beyond the window is about exp(-9)
    const auto peaks = local_maxima(g);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].coord0, 0.0, 1e-12);
    EXPECT_FALSE(g.beyond_cutoff_warning);
}

TEST(Husimi, FockStateQIsRing) {
    const BasisSpec b = make_basis(1, 10);
    const QFunctionGrid g = boson_q(product_state(b, 0, 2), b, BosonGridSpec::square(4.0, 81));
    for (std::size_t i = 0; i < g.axis0.size(); i += 9) {
        const double r2 = g.axis0[i] * g.axis0[i] + g.axis1[40] * g.axis1[40];
        EXPECT_NEAR(g.at(i, 40), std::exp(-r2) * r2 * r2 / (2.0 * M_PI), 1e-14);
    }
    EXPECT_NEAR(normalization(g), 1.0, 1e-5);
}

TEST(Husimi, SpinQOfAllDownPeaksAtSouthPole) {
    const std::size_t n = 8;
    const BasisSpec b = make_basis(n, 1);
    const QFunctionGrid g = spin_q(product_state(b, 0, 0), b, SpinGridSpec{91, 72});
    EXPECT_NEAR(g.prefactor, 9.0 / (4.0 * M_PI), 1e-15);
    for (std::size_t i = 0; i < g.axis0.size(); i += 10) {
        const double s2 = std::pow(std::sin(0.5 * g.axis0[i]), 2);
        EXPECT_NEAR(g.at(i, 13), g.prefactor * std::pow(s2, static_cast<double>(n)), 1e-13);
    }
    EXPECT_NEAR(normalization(g), 1.0, 1e-4);
    const auto peaks = local_maxima(g);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].coord0, M_PI, 1e-12);
}

TEST(Husimi, CutoffWarningAndGridValidation) {
    const BasisSpec b = make_basis(1, 4);
    EXPECT_TRUE(boson_q(product_state(b, 0, 0), b, BosonGridSpec::square(3.0, 11)).beyond_cutoff_warning);
    EXPECT_THROW(spin_q(product_state(b, 0, 0), b, SpinGridSpec{1, 4}), std::invalid_argument);
    EXPECT_THROW(boson_q(product_state(make_basis(2, 4), 0, 0), b), std::invalid_argument);
    const BosonGridSpec s = BosonGridSpec::for_cutoff(16);
    EXPECT_DOUBLE_EQ(s.re_max, 7.0);
}
