#include "qcd/basis.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcd;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Basis, DimensionIsProductOfSpinAndFockSizes) {
    EXPECT_EQ(make_basis(4, 6).dim(), 35u);
    EXPECT_EQ(make_basis(80, 80).dim(), 6561u);
    EXPECT_EQ(make_basis(1, 0).dim(), 2u);
}

TEST(Basis, FlatIndexIsBosonMajor) {
    const BasisSpec b = make_basis(3, 2);
    for (std::size_t nb = 0; nb <= 2; ++nb)
        for (std::size_t k = 0; k <= 3; ++k) {
            const std::size_t f = b.index(k, nb);
            EXPECT_EQ(f, nb * 4 + k);
            EXPECT_EQ(b.m_index_of(f), k);
            EXPECT_EQ(b.boson_of(f), nb);
            EXPECT_DOUBLE_EQ(b.m_of(f), static_cast<double>(k) - 1.5);
        }
}

TEST(Basis, RejectsInvalidSizesAndIndices) {
    EXPECT_THROW(make_basis(0, 3), std::invalid_argument);
    EXPECT_THROW(make_basis(2, 2).index(3, 0), std::out_of_range);
    EXPECT_THROW(make_basis(2, 2).index(0, 3), std::out_of_range);
}

TEST(Basis, RaisingOperatorMatrixElement) {
    const BasisSpec b = make_basis(2, 0);
    EXPECT_NEAR(std::abs(spin_operator(b, SpinAxis::plus).at(b.index(2, 0), b.index(1, 0))), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(std::abs(spin_operator(b, SpinAxis::plus).at(b.index(1, 0), b.index(0, 0))), std::sqrt(2.0), 1e-14);
}

TEST(Basis, SzIsDiagonalInM) {
    const BasisSpec b = make_basis(2, 0);
    Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(3, 3);
    ref.diagonal() << -1.0, 0.0, 1.0;
    EXPECT_EQ(max_abs(spin_operator(b, SpinAxis::z).to_dense() - ref), 0.0);
}

TEST(Basis, AllUpStateHasSySquaredEqualToHalfS) {
    for (std::size_t n : {2u, 4u, 9u}) {
        const BasisSpec b = make_basis(n, 0);
        Eigen::VectorXcd up = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.dim()));
        up(static_cast<Eigen::Index>(b.index(n, 0))) = 1.0;
        EXPECT_NEAR(spin_y_squared(b).expectation(up).real(), 0.25 * static_cast<double>(n), 1e-12);
    }
}

TEST(Basis, SpinCommutatorsAndCasimir) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const BasisSpec b = make_basis(n, 1);
        const Eigen::MatrixXcd x = spin_operator(b, SpinAxis::x).to_dense();
        const Eigen::MatrixXcd y = spin_operator(b, SpinAxis::y).to_dense();
        const Eigen::MatrixXcd z = spin_operator(b, SpinAxis::z).to_dense();
        const std::complex<double> i(0.0, 1.0);
        EXPECT_LT(max_abs(x * y - y * x - i * z), 1e-12);
        EXPECT_LT(max_abs(y * z - z * y - i * x), 1e-12);
        EXPECT_LT(max_abs(z * x - x * z - i * y), 1e-12);
        const double s = b.total_spin();
        EXPECT_LT(max_abs(x * x + y * y + z * z - s * (s + 1.0) * Eigen::MatrixXcd::Identity(x.rows(), x.cols())), 1e-12);
        EXPECT_LT(max_abs(y * y - spin_y_squared(b).to_dense()), 1e-12);
    }
}

TEST(Basis, BosonCommutatorHoldsBelowTheCutoff) {
    const BasisSpec b = make_basis(2, 6);
    const Eigen::MatrixXcd d = boson_operator(b, BosonKind::annihilate).to_dense();
    const Eigen::MatrixXcd c = d * d.adjoint() - d.adjoint() * d;
    for (std::size_t k = 0; k < b.dim(); ++k) {
        if (b.boson_of(k) == b.fock_cutoff()) continue;
        const auto kk = static_cast<Eigen::Index>(k);
        EXPECT_NEAR(std::abs(c(kk, kk) - 1.0), 0.0, 1e-12);
    }
    const Eigen::MatrixXcd num = boson_operator(b, BosonKind::number).to_dense();
    EXPECT_LT(max_abs(num - d.adjoint() * d), 1e-12);
    EXPECT_LT(max_abs(boson_operator(b, BosonKind::create).to_dense() - d.adjoint()), 1e-14);
    EXPECT_LT(max_abs(boson_operator(b, BosonKind::position).to_dense() - d - d.adjoint()), 1e-14);
}

TEST(Basis, ParityIsDiagonalSignOfNPlusMIndex) {
    const BasisSpec b = make_basis(3, 3);
    const Eigen::MatrixXcd p = parity_operator(b).to_dense();
    for (std::size_t k = 0; k < b.dim(); ++k) {
        const double expect = (b.boson_of(k) + b.m_index_of(k)) % 2 == 0 ? 1.0 : -1.0;
        EXPECT_EQ(parity_sign(b, k), expect);
        EXPECT_EQ(p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real(), expect);
    }
    EXPECT_LT(max_abs(p * p - Eigen::MatrixXcd::Identity(p.rows(), p.cols())), 1e-15);
}

TEST(Basis, OperatorBuildsAreDeterministic) {
    const BasisSpec b = make_basis(7, 5);
    const auto e1 = spin_x_boson_position(b).entries();
    const auto e2 = spin_x_boson_position(b).entries();
    ASSERT_EQ(e1.size(), e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
        EXPECT_EQ(e1[i].row, e2[i].row);
        EXPECT_EQ(e1[i].col, e2[i].col);
        EXPECT_EQ(e1[i].value, e2[i].value);
    }
}
