#include "dense_reference.hpp"
#include "qcd/solver.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qcd;

namespace {

Eigen::VectorXcd random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
    return v.normalized();
}

// exp(-i H t) psi from the dense eigendecomposition.
Eigen::VectorXcd exact_propagate(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd c = v.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(std::complex<double>(0.0, -es.eigenvalues()(k) * t));
    return v * c;
}

} // namespace

TEST(StateVector, RejectsUnnormalizedAndEmptyInput) {
    EXPECT_THROW(StateVector(Eigen::VectorXcd::Ones(3)), std::invalid_argument);
    EXPECT_THROW(StateVector(Eigen::VectorXcd()), std::invalid_argument);
    EXPECT_THROW(StateVector::normalized(Eigen::VectorXcd::Zero(3)), std::invalid_argument);
    const StateVector s = StateVector::normalized(Eigen::VectorXcd::Ones(4));
    EXPECT_NEAR(s.fidelity(s), 1.0, 1e-15);
}

TEST(GroundState, DecoupledEnergyIsMinusHalfN) {
    for (std::size_t n : {1u, 4u, 11u}) {
        const BasisSpec b = make_basis(n, 4);
        const GroundState gs = ground_state(build_hamiltonian(b, ModelParams{1.0, 0.0, 0.0}), b);
        EXPECT_TRUE(gs.converged);
        EXPECT_NEAR(gs.energy, -0.5 * static_cast<double>(n), 1e-10);
        EXPECT_NEAR(gs.gap, 1.0, 1e-8);
        EXPECT_NEAR(gs.parity, 1.0, 1e-10); // all-down vacuum: m_index = n = 0
    }
}

TEST(GroundState, AgreesWithDenseSectorDiagonalization) {
    const std::vector<ModelParams> points{{1.0, 0.3, 0.2}, {1.0, 0.8, 0.0}, {1.0, 0.2, 1.0}, {1.0, 0.7, 0.9}, {0.6, 1.1, 0.4, 1.3}};
    for (const auto& p : points) {
        const std::size_t n = 6;
        const std::size_t m = 18;
        const BasisSpec b = make_basis(n, m);
        const GroundState gs = ground_state(build_hamiltonian(b, p), b);
        const testref::Mat h = testref::hamiltonian(n, m, p);
        const auto even = testref::sector_ground(h, n, 1);
        const auto odd = testref::sector_ground(h, n, -1);
        const auto& low = even.energy <= odd.energy ? even : odd;
        EXPECT_TRUE(gs.converged);
        EXPECT_NEAR(gs.energy, low.energy, 1e-9 * std::max(1.0, std::abs(low.energy)));
        EXPECT_NEAR(gs.state.fidelity(StateVector::normalized(testref::to_complex(low.state))), 1.0, 1e-8);
        EXPECT_LT(gs.residual, 1e-7);
    }
}

TEST(GroundState, GapIsMeasuredAcrossBothSectors) {
    const std::size_t n = 4, m = 12;
    const ModelParams p{1.0, 0.4, 0.3};
    const BasisSpec b = make_basis(n, m);
    const GroundState gs = ground_state(build_hamiltonian(b, p), b);
    Eigen::SelfAdjointEigenSolver<testref::Mat> es(testref::hamiltonian(n, m, p), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(gs.gap, es.eigenvalues()(1) - es.eigenvalues()(0), 1e-8);
}

TEST(GroundState, EvenParityVariantPicksSymmetricState) {
    const std::size_t n = 6, m = 20;
    const ModelParams p{1.0, 0.9, 0.2};
    const BasisSpec b = make_basis(n, m);
    const GroundState gs = ground_state_even_parity(build_hamiltonian(b, p), parity_operator(b), b);
    EXPECT_NEAR(gs.parity, 1.0, 1e-10);
    EXPECT_NEAR(gs.energy, testref::sector_ground(testref::hamiltonian(n, m, p), n, 1).energy, 1e-9);
}

TEST(GroundState, FlagsTruncatedFockSpace) {
    const BasisSpec b = make_basis(10, 3);
    const GroundState gs = ground_state(build_hamiltonian(b, ModelParams{1.0, 1.0, 0.0}), b);
    EXPECT_FALSE(gs.cutoff_adequate);
    EXPECT_GT(gs.top_fock_population, kCutoffPopulationLimit);
}

TEST(GroundState, RejectsMismatchedBasis) {
    const BasisSpec b = make_basis(3, 3);
    EXPECT_THROW(ground_state(build_hamiltonian(make_basis(3, 4), ModelParams{}), b), std::invalid_argument);
}

TEST(DenseOracle, RefusesLargeMatrices) {
    EXPECT_THROW(dense_spectrum_oracle(Eigen::MatrixXcd::Identity(kDenseOracleMaxDim + 1, kDenseOracleMaxDim + 1), 1),
                 std::invalid_argument);
}

TEST(Evolution, StaticHamiltonianMatchesExactPropagator) {
    const std::size_t n = 4, m = 8;
    const ModelParams p{1.0, 0.6, 0.5};
    const BasisSpec b = make_basis(n, m);
    const auto h = build_time_dependent(b, p, QuenchProfile{0.6, 0.0, TanhRamp{10.0}});
    const Eigen::VectorXcd psi0 = random_state(b.dim(), 3);
    const Eigen::VectorXcd ref = exact_propagate(testref::hamiltonian(n, m, p), psi0, 2.0);
    for (Integrator method : {Integrator::rk4, Integrator::krylov_expm}) {
        const auto traj = evolve(h, StateVector(psi0), EvolutionConfig{.t_final = 2.0, .dt = 0.002, .method = method, .record_stride = 1000});
        ASSERT_FALSE(traj.empty());
        EXPECT_DOUBLE_EQ(traj.back().sample.t, 2.0);
        EXPECT_NEAR(traj.back().state.fidelity(StateVector::normalized(ref)), 1.0, 1e-9);
    }
}

TEST(Evolution, EigenstateOnlyAcquiresAPhase) {
    const BasisSpec b = make_basis(6, 12);
    const ModelParams p{1.0, 0.3, 0.2};
    const GroundState gs = ground_state(build_hamiltonian(b, p), b);
    const auto h = build_time_dependent(b, p, QuenchProfile{0.3, 0.0, TanhRamp{10.0}});
    const auto traj = evolve(h, gs.state, EvolutionConfig{.t_final = 5.0, .dt = 0.005, .method = Integrator::rk4, .record_stride = 100});
    for (const auto& pt : traj) {
        EXPECT_NEAR(pt.state.fidelity(gs.state), 1.0, 1e-9);
        EXPECT_LT(pt.sample.norm_drift, 1e-9);
    }
}

TEST(Evolution, RecordsStrideAndFinalStep) {
    const BasisSpec b = make_basis(2, 3);
    const auto h = build_time_dependent(b, ModelParams{1.0, 0.1, 0.0}, QuenchProfile{0.1, 0.05, TanhRamp{1.0}});
    const StateVector psi0 = StateVector::normalized(random_state(b.dim(), 1));
    const auto traj = evolve(h, psi0, EvolutionConfig{.t_final = 1.0, .dt = 0.03, .method = Integrator::rk4, .record_stride = 10});
    // 34 steps of 1/34: samples at 0, 10, 20, 30 and 34.
    ASSERT_EQ(traj.size(), 5u);
    EXPECT_EQ(traj.back().sample.step, 34u);
    EXPECT_DOUBLE_EQ(traj.back().sample.t, 1.0);
    EXPECT_NEAR(traj.back().sample.lambda, 0.1 + 0.05 * std::pow(std::tanh(1.0), 2), 1e-15);
}

TEST(Evolution, IntegratorsAgreeOnAQuench) {
    const BasisSpec b = make_basis(6, 14);
    const ModelParams p{1.0, 0.4, 0.6};
    const GroundState gs = ground_state(build_hamiltonian(b, p), b);
    const auto h = build_time_dependent(b, p, QuenchProfile{0.4, 0.05, TanhRamp{2.0}});
    const auto a = evolve(h, gs.state, EvolutionConfig{.t_final = 6.0, .dt = 0.005, .method = Integrator::rk4, .record_stride = 1200});
    const auto k = evolve(h, gs.state, EvolutionConfig{.t_final = 6.0, .dt = 0.005, .method = Integrator::krylov_expm, .record_stride = 1200});
    EXPECT_NEAR(a.back().state.fidelity(k.back().state), 1.0, 1e-8);
}

TEST(Evolution, DivergentStepAborts) {
    const BasisSpec b = make_basis(8, 16);
    const auto h = build_time_dependent(b, ModelParams{1.0, 0.5, 0.5}, QuenchProfile{0.5, 0.0, TanhRamp{10.0}});
    const StateVector psi0 = StateVector::normalized(random_state(b.dim(), 9));
    EXPECT_THROW(evolve(h, psi0, EvolutionConfig{.t_final = 50.0, .dt = 1.0, .method = Integrator::rk4, .record_stride = 1}),
                 EvolutionError);
}

TEST(Evolution, ConfigValidation) {
    EXPECT_THROW((EvolutionConfig{.t_final = 1.0, .dt = 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW(EvolutionConfig{.t_final = -1.0}.validate(), std::invalid_argument);
    EXPECT_THROW((EvolutionConfig{.t_final = 1.0, .dt = 0.1, .method = Integrator::rk4, .record_stride = 0}.validate()),
                 std::invalid_argument);
    EXPECT_EQ(EvolutionConfig{.t_final = 60.0}.steps(), 12000u);
}
