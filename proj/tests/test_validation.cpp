#include "qcd/validation.hpp"

#include <gtest/gtest.h>

using namespace qcd;

namespace {

std::string failures(const Reports& reports) {
    std::string out;
    for (const auto& r : reports)
        if (!r.pass) out += r.case_id + " (" + r.quantity + "): computed " + fmt(r.computed) + " vs " + fmt(r.reference) + " " + r.note + "\n";
    return out;
}

} // namespace

class OracleScope : public ::testing::TestWithParam<std::string> {};

TEST_P(OracleScope, AllCasesPass) {
    const Reports reports = run_oracle_suite(GetParam(), 2);
    EXPECT_FALSE(reports.empty());
    EXPECT_TRUE(all_pass(reports)) << failures(reports);
}

INSTANTIATE_TEST_SUITE_P(Scopes, OracleScope,
                         ::testing::Values("basis", "hamiltonian", "solver", "observables", "meanfield", "criticality", "husimi"));

TEST(Validation, ReportDeviationAndChecks) {
    const OracleReport a = make_report("basis.dim", "dimension", 35.0, Provenance::closed_form, 35.0);
    EXPECT_TRUE(a.pass);
    EXPECT_EQ(a.abs_deviation, 0.0);
    const OracleReport b = make_report("basis.dim", "dimension", 35.0, Provenance::closed_form, 36.0);
    EXPECT_FALSE(b.pass);
    EXPECT_NEAR(b.rel_deviation, 1.0 / 35.0, 1e-15);
    const OracleReport c = make_report("basis.dim", "dimension", 35.0, Provenance::closed_form, std::nan(""));
    EXPECT_FALSE(c.pass);
    EXPECT_THROW(make_report("no.such.case", "x", 0.0, Provenance::closed_form, 0.0), std::logic_error);
}

TEST(Validation, EveryToleranceIsNonNegative) {
    for (const auto& [id, tol] : tolerance_table()) EXPECT_GE(tol.value, 0.0) << id;
}

TEST(Validation, UnknownScopeAndFigureAreRejected) {
    EXPECT_THROW(run_oracle_suite("spectra"), std::invalid_argument);
    EXPECT_THROW(figure_regression("fig9"), std::invalid_argument);
    EXPECT_EQ(figure_ids().size(), 6u);
}

TEST(Validation, FailingCaseIsReportedNotThrown) {
    const OracleReport r = failed_report("solver.x", "boom");
    EXPECT_FALSE(r.pass);
    EXPECT_TRUE(std::isnan(r.computed));
    EXPECT_FALSE(all_pass({r}));
}
