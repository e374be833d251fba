#include "qcd/meanfield.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcd;

TEST(MeanField, PhaseBoundariesScaleWithParameters) {
    const PhaseBoundaries b = phase_boundaries(ModelParams{1.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(b.lambda_c2, 0.5);
    EXPECT_DOUBLE_EQ(b.j_c2, 0.5);
    EXPECT_DOUBLE_EQ(b.first_order_j(0.5), 0.5);
    const PhaseBoundaries c = phase_boundaries(ModelParams{4.0, 0.0, 0.0, 0.25});
    EXPECT_DOUBLE_EQ(c.lambda_c2, 0.5);
    EXPECT_DOUBLE_EQ(c.j_c2, 2.0);
}

TEST(MeanField, ClassificationOfRepresentativePoints) {
    EXPECT_EQ(classify(ModelParams{1.0, 0.2, 0.2}).label, "PN");
    EXPECT_EQ(classify(ModelParams{1.0, 0.3, 1.0}).label, "FN");
    EXPECT_EQ(classify(ModelParams{1.0, 0.8, 0.0}).label, "FS");
    EXPECT_EQ(classify(ModelParams{1.0, 0.8, 1.0}).label, "FS"); // 2 lambda^2 = 1.28 > J
    EXPECT_EQ(classify(ModelParams{1.0, 0.5, 0.5}).label, "triple");
    EXPECT_EQ(classify(ModelParams{1.0, 0.5, 0.2}).label, "PN-FS");
    EXPECT_EQ(classify(ModelParams{1.0, 0.2, 0.5}).label, "PN-FN");
    EXPECT_EQ(classify(ModelParams{1.0, 0.6, 0.72}).label, "FN-FS");
}

// Energies from the closed-form stationary points, written out independently.
TEST(MeanField, MinimizerReachesClosedFormEnergies) {
    struct Case {
        ModelParams p;
        Phase phase;
        double energy;
        double cos_theta;
    };
    const std::vector<Case> cases{
        {{1.0, 0.2, 0.2}, Phase::PN, -0.5, -1.0},
        {{1.0, 0.8, 0.0}, Phase::FS, -0.64 - 1.0 / (16.0 * 0.64), -1.0 / (4.0 * 0.64)},
        {{1.0, 0.3, 1.0}, Phase::FN, -0.5 - 1.0 / 8.0, -0.5},
        {{1.0, 0.7, 1.5}, Phase::FN, -0.75 - 1.0 / 12.0, -1.0 / 3.0},
    };
    for (const auto& c : cases) {
        const MeanFieldSolution s = minimize(c.p);
        EXPECT_EQ(s.phase, c.phase);
        EXPECT_NEAR(s.energy_per_spin, c.energy, 1e-10);
        EXPECT_NEAR(std::cos(s.theta), c.cos_theta, 1e-6);
        EXPECT_NEAR(energy_per_spin(c.p, s.alpha, s.theta, s.phi), s.energy_per_spin, 1e-14);
    }
}

TEST(MeanField, FsSolutionHasCoherentFieldAndPartner) {
    const ModelParams p{1.0, 0.8, 0.0};
    const MeanFieldSolution s = minimize(p);
    // alpha = -lambda sin(theta) cos(phi) / omega0 at the stationary point.
    EXPECT_NEAR(s.alpha.real(), -p.lambda * std::sin(s.theta) * std::cos(s.phi), 1e-7);
    EXPECT_NEAR(std::norm(s.alpha), 0.64 * (1.0 - std::pow(1.0 / 2.56, 2)), 1e-7);
    ASSERT_TRUE(s.degenerate_partner.has_value());
    EXPECT_NEAR(s.degenerate_partner->alpha.real(), -s.alpha.real(), 1e-15);
}

TEST(MeanField, BranchFormulasMatchEnergyFunction) {
    const ModelParams p{1.0, 0.9, 0.0};
    const BranchValue fs = fs_branch(p);
    ASSERT_TRUE(fs.exists);
    const double theta = std::acos(fs.cos_theta);
    const double a = -p.lambda * std::sin(theta);
    EXPECT_NEAR(energy_per_spin(p, {a, 0.0}, theta, 0.0), fs.energy, 1e-14);
    const ModelParams q{1.0, 0.1, 1.2};
    const BranchValue fn = fn_branch(q);
    ASSERT_TRUE(fn.exists);
    EXPECT_NEAR(energy_per_spin(q, {0.0, 0.0}, std::acos(fn.cos_theta), 0.5 * M_PI), fn.energy, 1e-14);
    EXPECT_FALSE(fn_branch(ModelParams{1.0, 0.1, 0.3}).exists);
    EXPECT_FALSE(fs_branch(ModelParams{1.0, 0.3, 0.0}).exists);
}

TEST(MeanField, FirstOrderCrossingFollowsParabola) {
    for (double l : {0.6, 0.75, 0.9}) {
        const double j = first_order_crossing_j(ModelParams{1.0, l, 0.0}, 0.51, 3.0);
        EXPECT_NEAR(j, 2.0 * l * l, 1e-7);
    }
}
