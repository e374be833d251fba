#include "dense_reference.hpp"
#include "qcd/observables.hpp"
#include "qcd/solver.hpp"

#include <gtest/gtest.h>

using namespace qcd;

TEST(Observables, DecoupledGroundState) {
    for (std::size_t n : {2u, 5u, 10u}) {
        const BasisSpec b = make_basis(n, 3);
        const GroundState gs = ground_state(build_hamiltonian(b, ModelParams{1.0, 0.0, 0.0}), b);
        const ObservableSet o = measure(gs.state, b);
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(o.zeta_S, 0.0, 1e-12);
        EXPECT_NEAR(o.m_z, -0.5, 1e-12);
        EXPECT_NEAR(o.zeta_Mx, 0.25 / nn, 1e-12); // <S_x^2> = s/2 in |s,-s>
        EXPECT_NEAR(o.zeta_My, 0.25 / nn, 1e-12);
        EXPECT_NEAR(o.n_var, 0.0, 1e-12);
    }
}

TEST(Observables, SumRuleClosesToCasimir) {
    const std::size_t n = 7, m = 16;
    const BasisSpec b = make_basis(n, m);
    const GroundState gs = ground_state(build_hamiltonian(b, ModelParams{1.0, 0.6, 0.8}), b);
    const ObservableSet o = measure(gs.state, b);
    const double s = b.total_spin();
    EXPECT_NEAR(o.zeta_Mx + o.zeta_My + o.sz2, s * (s + 1.0) / 49.0, 1e-12);
}

TEST(Observables, MatchDenseOperatorExpectations) {
    const std::size_t n = 5, m = 14;
    const ModelParams p{1.0, 0.7, 0.6};
    const BasisSpec b = make_basis(n, m);
    const auto ref = testref::sector_ground(testref::hamiltonian(n, m, p), n, 1);
    const StateVector psi = StateVector::normalized(testref::to_complex(ref.state));
    const ObservableSet o = measure(psi, b);
    const Eigen::MatrixXcd sx = spin_operator(b, SpinAxis::x).to_dense();
    const Eigen::MatrixXcd sy = spin_operator(b, SpinAxis::y).to_dense();
    const Eigen::VectorXcd& v = psi.amplitudes();
    EXPECT_NEAR(o.zeta_Mx, v.dot(sx * sx * v).real() / 25.0, 1e-12);
    EXPECT_NEAR(o.zeta_My, v.dot(sy * sy * v).real() / 25.0, 1e-12);
    const auto mom = testref::boson_moments(ref.state, n);
    EXPECT_NEAR(o.n_mean, mom[0], 1e-11);
    EXPECT_NEAR(o.n_var, mom[1], 1e-11);
    EXPECT_NEAR(o.zeta_S, mom[0] / 5.0, 1e-12);
}

TEST(Observables, BosonMomentsIgnoreOverallNorm) {
    const BasisSpec b = make_basis(1, 2);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
    v(0) = 1.0; // n = 0
    v(5) = 1.0; // n = 2
    const BosonMoments bm = boson_moments(b, 3.0 * v);
    EXPECT_NEAR(bm.n_mean, 1.0, 1e-15);
    EXPECT_NEAR(bm.n_var, 1.0, 1e-15);
    EXPECT_THROW(boson_moments(b, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST(Observables, GainAndSqnrFloors) {
    EXPECT_EQ(gain(3.0, 1.5).value, 2.0);
    EXPECT_FALSE(gain(3.0, 1.5).degenerate);
    EXPECT_TRUE(gain(0.2, 0.0).degenerate);
    EXPECT_EQ(gain(0.2, 0.0).value, 0.2);
    EXPECT_EQ(sqnr(2.0, 0.5).value, 8.0);
    EXPECT_TRUE(sqnr(2.0, 0.0).undefined);
}
