#include "dense_reference.hpp"
#include "qcd/criticality.hpp"

#include <gtest/gtest.h>

using namespace qcd;

namespace {

double dense_n_mean(std::size_t n, std::size_t m, const ModelParams& p) {
    const testref::Mat h = testref::hamiltonian(n, m, p);
    const auto even = testref::sector_ground(h, n, 1);
    const auto odd = testref::sector_ground(h, n, -1);
    return testref::boson_moments(even.energy <= odd.energy ? even.state : odd.state, n)[0];
}

} // namespace

TEST(Criticality, LinspaceEndpoints) {
    const auto x = linspace(0.1, 0.5, 5);
    ASSERT_EQ(x.size(), 5u);
    EXPECT_DOUBLE_EQ(x.front(), 0.1);
    EXPECT_DOUBLE_EQ(x.back(), 0.5);
    EXPECT_NEAR(x[2], 0.3, 1e-15);
    EXPECT_EQ(linspace(0.2, 0.2, 7).size(), 1u);
    EXPECT_THROW(linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST(Criticality, SolvePointMatchesDenseReference) {
    const ModelParams p{1.0, 0.45, 0.3};
    const PointResult r = solve_point(make_basis(4, 16), p);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.obs.n_mean, dense_n_mean(4, 16, p), 1e-9);
}

TEST(Criticality, ChiIsCentralDifferenceOfBosonNumber) {
    const std::size_t n = 4, m = 16;
    const ModelParams p{1.0, 0.0, 0.3};
    ChiScanOptions opt;
    opt.fd_step = 0.01;
    const ChiScan scan = chi_scan(make_basis(n, m), p, {0.3, 0.45, 0.6}, opt);
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
        const double l = scan.lambdas[i];
        const double ref = (dense_n_mean(n, m, p.with_lambda(l + 0.005)) - dense_n_mean(n, m, p.with_lambda(l - 0.005))) / (0.01 * 4.0);
        EXPECT_NEAR(scan.chi[i], ref, 1e-6 * std::max(1.0, std::abs(ref))) << "lambda=" << l;
        EXPECT_TRUE(scan.converged[i]);
    }
    EXPECT_EQ(scan.lambda_at_max, 0.6);
}

TEST(Criticality, ChiScanSharesGroundStatesOnMatchingGrid) {
    ChiScanOptions opt;
    opt.fd_step = 0.02;
    const ChiScan scan = chi_scan(make_basis(3, 8), ModelParams{1.0, 0.0, 0.0}, linspace(0.2, 0.3, 11), opt);
    EXPECT_EQ(scan.ground_states, 13u);
}

TEST(Criticality, ChiScanRefinementStaysInsideBracket) {
    ChiScanOptions opt;
    opt.fd_step = 0.04;
    opt.refine_iterations = 10;
    opt.refine_fd_step = 0.002;
    const ChiScan scan = chi_scan(make_basis(6, 24), ModelParams{1.0, 0.0, 0.0}, linspace(0.4, 0.8, 11), opt);
    EXPECT_TRUE(scan.refined);
    EXPECT_EQ(scan.chi_max_fd_step, 0.002);
    EXPECT_GT(scan.lambda_at_max, 0.4);
    EXPECT_LT(scan.lambda_at_max, 0.8);
    const double coarse = *std::max_element(scan.chi.begin(), scan.chi.end());
    EXPECT_GT(scan.chi_max, 0.9 * coarse);
}

TEST(Criticality, ChiScanValidatesArguments) {
    const BasisSpec b = make_basis(2, 2);
    EXPECT_THROW(chi_scan(b, ModelParams{}, {}), std::invalid_argument);
    EXPECT_THROW(chi_scan(b, ModelParams{}, {0.0}), std::invalid_argument);
    ChiScanOptions bad;
    bad.fd_step = 0.0;
    EXPECT_THROW(chi_scan(b, ModelParams{}, {0.3}, bad), std::invalid_argument);
}

TEST(Criticality, ZetaCrossingBracketsTheLevel) {
    const BasisSpec b = make_basis(4, 20);
    const ModelParams p{1.0, 0.0, 0.0};
    const double l = zeta_crossing(b, p, 0.05, 0.2, 1.0, 1e-6);
    EXPECT_NEAR(dense_n_mean(4, 20, p.with_lambda(l)) / 4.0, 0.05, 1e-4);
    EXPECT_THROW(zeta_crossing(b, p, 10.0, 0.2, 1.0), std::invalid_argument);
}

TEST(Criticality, LocateTransitionOnStep) {
    const std::vector<double> x{0.0, 0.1, 0.2, 0.3, 0.4};
    const std::vector<double> y{0.0, 0.0, 0.0, 1.0, 1.0};
    const TransitionEstimate e = locate_transition(x, y);
    EXPECT_NEAR(e.steepest, 0.25, 1e-15);
    EXPECT_NEAR(e.max_slope, 10.0, 1e-12);
    EXPECT_NEAR(e.onset, 0.2, 1e-12);
    EXPECT_THROW(locate_transition({0.0}, {1.0}), std::invalid_argument);
}

TEST(Criticality, FitRecoversExactPolynomials) {
    const std::vector<double> xs{4, 8, 12, 16, 20};
    std::vector<double> lin, quad;
    for (double x : xs) {
        lin.push_back(0.5 + 0.25 * x);
        quad.push_back(1.0 - 0.1 * x + 0.02 * x * x);
    }
    const ScalingFit a = fit_scaling(xs, lin, FitModel::linear);
    EXPECT_NEAR(a.coefficients[0], 0.5, 1e-12);
    EXPECT_NEAR(a.leading(), 0.25, 1e-13);
    EXPECT_NEAR(a.r_squared, 1.0, 1e-14);
    const ScalingFit q = fit_scaling(xs, quad, FitModel::quadratic);
    EXPECT_NEAR(q.leading(), 0.02, 1e-13);
    EXPECT_NEAR(q.evaluate(10.0), 2.0, 1e-11);
    EXPECT_THROW(fit_scaling({1, 2, 3}, {1, 2, 3}, FitModel::quadratic), std::invalid_argument);
    EXPECT_THROW(fit_scaling({1, 3, 2}, {1, 2, 3}, FitModel::linear), std::invalid_argument);
}

TEST(Criticality, SlopeTableAppliesRSquaredGate) {
    const auto rows = slope_table({0.0, 1.0}, {10, 20, 30, 40}, {{1, 2, 3, 4}, {1, 4, 1, 4}});
    EXPECT_TRUE(rows[0].reported);
    EXPECT_NEAR(rows[0].slope, 0.1, 1e-13);
    EXPECT_FALSE(rows[1].reported);
    EXPECT_TRUE(std::isnan(rows[1].slope));
}

TEST(Criticality, EstimationErrorAndMeanFieldLambda) {
    EXPECT_DOUBLE_EQ(estimation_error(8.0, 0.01), 0.00125);
    EXPECT_THROW(estimation_error(0.0, 0.01), std::invalid_argument);
    EXPECT_DOUBLE_EQ(mean_field_lambda_c(ModelParams{1.0, 0.0, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(mean_field_lambda_c(ModelParams{1.0, 0.0, 1.0}), std::sqrt(0.5));
}

TEST(Quench, ZeroAmplitudeQuenchHasUnitGain) {
    QuenchSetup setup;
    setup.params = ModelParams{1.0, 0.0, 0.5};
    setup.delta_lambda = 0.0;
    setup.evolution = EvolutionConfig{.t_final = 5.0, .dt = 0.005, .method = Integrator::rk4, .record_stride = 100};
    const TimeSeries ts = run_quench(make_basis(6, 16), setup, 0.4);
    ASSERT_EQ(ts.times.size(), 11u);
    for (double g : ts.gain) EXPECT_NEAR(g, 1.0, 1e-8);
    EXPECT_FALSE(ts.gain_degenerate);
    EXPECT_NEAR(peak_of(ts).g_max, 1.0, 1e-8);
}

TEST(Quench, GainGrowsAfterRampNearCriticality) {
    QuenchSetup setup;
    setup.params = ModelParams{1.0, 0.0, 0.0};
    setup.delta_lambda = 0.05;
    setup.evolution = EvolutionConfig{.t_final = 20.0, .dt = 0.005, .method = Integrator::rk4, .record_stride = 200};
    const TimeSeries ts = run_quench(make_basis(8, 30), setup, 0.45);
    EXPECT_NEAR(ts.n0, dense_n_mean(8, 30, ModelParams{1.0, 0.45, 0.0}), 1e-9);
    const GainPeak pk = peak_of(ts);
    EXPECT_GT(pk.g_max, 1.0);
    EXPECT_NEAR(ts.lambda_t.back(), 0.45 + 0.05 * std::pow(std::tanh(2.0), 2), 1e-14);
}

TEST(Quench, DegenerateGainIsFlagged) {
    QuenchSetup setup;
    setup.params = ModelParams{1.0, 0.0, 0.0};
    setup.delta_lambda = 0.1;
    setup.evolution = EvolutionConfig{.t_final = 1.0, .dt = 0.01, .method = Integrator::rk4, .record_stride = 10};
    const TimeSeries ts = run_quench(make_basis(4, 6), setup, 0.0);
    EXPECT_TRUE(ts.gain_degenerate);
    EXPECT_TRUE(peak_of(ts).flagged);
}

TEST(Quench, GainAtInterpolatesSamples) {
    TimeSeries ts;
    ts.times = {0.0, 1.0, 2.0};
    ts.gain = {1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(gain_at(ts, 1.0), 3.0);
    EXPECT_DOUBLE_EQ(gain_at(ts, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(gain_at(ts, 1.5), 2.5);
    EXPECT_THROW(gain_at(ts, 2.5), std::out_of_range);
}
