// Acceptance run: one PASS/FAIL line per criterion. Tolerances live in the
// validation tolerance table; the runtime bounds are pinned here.
//
// Usage: qcd_acceptance [desk|full] [jobs]   (default: full, QCD_JOBS or all cores)

#include "qcd/validation.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>

using namespace qcd;

namespace {

constexpr double kDecoupledSeconds = 1.0;
constexpr double kOracleSeconds = 30.0;

struct Criterion {
    int id;
    std::string title;
    Reports reports;
    std::string extra; // appended to the summary line
};

Reports select(const Reports& all, const std::set<std::string>& suffixes) {
    Reports out;
    for (const auto& r : all) {
        const auto dot = r.case_id.rfind('.');
        const std::string tail = dot == std::string::npos ? r.case_id : r.case_id.substr(dot + 1);
        if (suffixes.count(tail) || r.quantity == "exception") out.push_back(r);
    }
    return out;
}

template <class F>
Reports timed(F&& f, double limit, const std::string& case_id, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    Reports r = f();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    OracleReport t;
    t.case_id = case_id;
    t.quantity = "runtime [s]";
    t.reference = limit;
    t.computed = seconds;
    t.abs_deviation = std::max(0.0, seconds - limit);
    t.check = Check::at_most;
    t.tolerance = limit;
    t.pass = seconds <= limit;
    r.push_back(t);
    return r;
}

void print(const Criterion& c) {
    const bool ok = !c.reports.empty() && all_pass(c.reports);
    std::printf("criterion %2d %s: %s%s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), c.extra.c_str());
    for (const auto& r : c.reports) {
        std::printf("    [%s] %-32s %-58s computed %-12s reference %-10s %s\n", r.pass ? "ok" : "xx", r.case_id.c_str(),
                    r.quantity.c_str(), fmt(r.computed).c_str(), fmt(r.reference).c_str(), r.note.c_str());
    }
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    const Scale scale = argc > 1 && std::string(argv[1]) == "desk" ? Scale::desk : Scale::full;
    const std::size_t jobs = argc > 2 ? static_cast<std::size_t>(std::stoul(argv[2])) : default_jobs();
    const Log log = [](const std::string& m) { std::cerr << "  .. " << m << std::endl; };
    std::printf("acceptance at %s scale, %zu jobs\n", scale_name(scale).c_str(), jobs);

    std::vector<Criterion> crit;
    double secs = 0.0;

    crit.push_back({1, "decoupled exactness", timed(suites::decoupled_exactness, kDecoupledSeconds, "decoupled.runtime", secs), ""});
    print(crit.back());

    crit.push_back({2, "Lanczos vs dense oracle on 20 random points",
                    timed([] { return suites::random_oracle(20, 20240607); }, kOracleSeconds, "random_oracle.runtime", secs), ""});
    print(crit.back());

    crit.push_back({3, "phase boundaries from the (lambda, J) sweep", figure_regression("fig2", scale, jobs, log), ""});
    print(crit.back());

    const Reports fig3 = figure_regression("fig3", scale, jobs, log);
    crit.push_back({4, "first-order jump and shrinking width", select(fig3, {"half_jump", "width_violations"}), ""});
    print(crit.back());
    crit.push_back({5, "N^2 growth of the sensitivity peak", select(fig3, {"chi_ratio", "chi_leading", "chi_r2"}), ""});
    print(crit.back());

    crit.push_back({6, "gain localized at the first-order point", figure_regression("fig4", scale, jobs, log), ""});
    print(crit.back());

    crit.push_back({7, "linear gain and SQNR scaling, slope vs J", figure_regression("fig5", scale, jobs, log), ""});
    print(crit.back());

    Reports mf = suites::meanfield_stationary();
    const Reports cross = suites::meanfield_crossings();
    mf.insert(mf.end(), cross.begin(), cross.end());
    crit.push_back({8, "mean-field stationary values and FN/FS crossing", mf, ""});
    print(crit.back());

    Reports q = select(figure_regression("figS1", scale, jobs, log), {"peak_count", "mirror_symmetry", "normalization"});
    const Reports s2 = select(figure_regression("figS2", scale, jobs, log),
                              {"peak_count", "pn_pole", "fn_lobe_cos", "fn_lobe_phi", "normalization"});
    q.insert(q.end(), s2.begin(), s2.end());
    crit.push_back({9, "Husimi Q peak structure at N=M=12", q, ""});
    print(crit.back());

    Reports hyg = suites::evolution_hygiene();
    const Reports fd = suites::fd_step_halving();
    hyg.insert(hyg.end(), fd.begin(), fd.end());
    crit.push_back({10, "norm and energy conservation, fd step halving", hyg, ""});
    print(crit.back());

    std::printf("\nsummary\n");
    int failed = 0;
    for (const auto& c : crit) {
        const bool ok = !c.reports.empty() && all_pass(c.reports);
        failed += !ok;
        std::printf("%2d %s %s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str());
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(crit.size()) - failed, crit.size());
    return failed == 0 ? 0 : 1;
}
