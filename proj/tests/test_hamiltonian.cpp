#include "dense_reference.hpp"
#include "qcd/hamiltonian.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace qcd;

TEST(Hamiltonian, DecoupledPointIsDiagonal) {
    const BasisSpec b = make_basis(4, 3);
    const Eigen::MatrixXcd h = build_hamiltonian(b, ModelParams{1.0, 0.0, 0.0}).to_dense();
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            const auto k = static_cast<std::size_t>(r);
            const double expect = r == c ? static_cast<double>(b.boson_of(k)) + b.m_of(k) : 0.0;
            EXPECT_EQ(h(r, c), std::complex<double>(expect, 0.0));
        }
}

TEST(Hamiltonian, MatchesElementwiseReference) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 1.4);
    for (int k = 0; k < 8; ++k) {
        const ModelParams p{u(rng), u(rng), u(rng), u(rng)};
        const std::size_t n = 1 + static_cast<std::size_t>(k);
        const std::size_t m = 2 + static_cast<std::size_t>(k % 3);
        const Eigen::MatrixXcd h = build_hamiltonian(make_basis(n, m), p).to_dense();
        EXPECT_LT((h.real() - testref::hamiltonian(n, m, p)).cwiseAbs().maxCoeff(), 1e-12) << "N=" << n;
        EXPECT_LT(h.imag().cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Hamiltonian, IsHermitianAndCommutesWithParity) {
    for (std::size_t n = 1; n <= 8; ++n) {
        const BasisSpec b = make_basis(n, 5);
        const SparseOperator h = build_hamiltonian(b, ModelParams{0.8, 0.9, 1.1});
        EXPECT_EQ(h.hermiticity_defect(), 0.0);
        const Eigen::MatrixXcd hd = h.to_dense();
        const Eigen::MatrixXcd pd = parity_operator(b).to_dense();
        EXPECT_LT((hd * pd - pd * hd).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Hamiltonian, TwoSpinGroundEnergyMatchesReference) {
    const ModelParams p{1.0, 0.5, 0.5};
    const Eigen::MatrixXcd h = build_hamiltonian(make_basis(2, 2), p).to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    EXPECT_NEAR(es.eigenvalues()(0), testref::lowest(testref::hamiltonian(2, 2, p)), 1e-12);
}

TEST(Hamiltonian, PartsAreLinearInLambda) {
    const BasisSpec b = make_basis(5, 4);
    const ModelParams p{1.0, 0.0, 0.7};
    const HamiltonianParts parts = build_hamiltonian_parts(b, p);
    for (double l : {0.0, 0.3, 1.7}) {
        const Eigen::MatrixXcd diff = parts.at_lambda(l).to_dense() - build_hamiltonian(b, p.with_lambda(l)).to_dense();
        EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Hamiltonian, ParameterValidation) {
    EXPECT_THROW(ModelParams(0.0, 0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams(1.0, -0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams(1.0, 0.1, -0.1).validate(), std::invalid_argument);
    EXPECT_THROW(ModelParams(1.0, 0.1, 0.1, 0.0).validate(), std::invalid_argument);
    EXPECT_NO_THROW(ModelParams(1.0, 0.0, 0.0).validate());
}

TEST(Envelope, ShapesStartAtZeroAndSaturate) {
    for (const std::string name : {"tanh_ramp", "exp_saturation", "sin2_ramp"}) {
        const QuenchProfile prof{0.7, 0.01, make_envelope(name, 10.0)};
        EXPECT_EQ(prof.envelope_at(0.0), 0.0) << name;
        EXPECT_NEAR(prof.envelope_at(400.0), 1.0, 1e-9) << name;
        double prev = 0.0;
        for (double t = 0.5; t < 60.0; t += 0.5) {
            const double v = prof.envelope_at(t);
            EXPECT_GE(v, prev - 1e-15) << name << " t=" << t;
            prev = v;
        }
    }
    EXPECT_THROW(make_envelope("linear", 10.0), std::invalid_argument);
    EXPECT_THROW(make_envelope("tanh_ramp", 0.0), std::invalid_argument);
}

TEST(Envelope, TabulatedTableInterpolatesAndValidates) {
    std::istringstream ok("# t P\n0 0\n10 0.5\n20 1\n");
    const TabulatedEnvelope env = read_envelope_table(ok);
    EXPECT_NEAR(env(5.0), 0.25, 1e-15);
    EXPECT_NEAR(env(15.0), 0.75, 1e-15);
    EXPECT_EQ(env(50.0), 1.0);
    std::istringstream nonzero_start("0 0.1\n1 1\n");
    EXPECT_THROW(read_envelope_table(nonzero_start), std::invalid_argument);
    std::istringstream unsorted("0 0\n2 0.5\n1 1\n");
    EXPECT_THROW(read_envelope_table(unsorted), std::invalid_argument);
}

TEST(TimeDependentHamiltonian, ReconstructsDirectAssembly) {
    const BasisSpec b = make_basis(6, 6);
    const ModelParams p{1.0, 0.0, 1.0};
    const QuenchProfile prof{0.70, 0.01, TanhRamp{10.0}};
    const TimeDependentHamiltonian td = build_time_dependent(b, p, prof);
    for (double t : {0.0, 3.0, 40.0, 75.5}) {
        const double th = std::tanh(t / 10.0);
        const double l = 0.70 + 0.01 * th * th;
        EXPECT_NEAR(td.lambda_at(t), l, 1e-15);
        EXPECT_LT((td.at(t).to_dense() - build_hamiltonian(b, p.with_lambda(l)).to_dense()).cwiseAbs().maxCoeff(), 1e-14);
    }
    EXPECT_THROW(td.lambda_at(-1.0), std::invalid_argument);
}
