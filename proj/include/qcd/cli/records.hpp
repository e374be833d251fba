// records.hpp: result records, their failure flags, and JSON / flat-table forms.

#pragma once

#include "qcd/criticality.hpp"
#include "qcd/husimi.hpp"
#include "qcd/meanfield.hpp"
#include "qcd/validation.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace qcd::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Ground-state summary at one parameter point.
struct GroundRecord {
    std::size_t n_spins{0};
    std::size_t cutoff{0};
    ModelParams params;
    PointResult point;
};

struct MeanFieldRecord {
    ModelParams params;
    MeanFieldSolution solution;
    Classification classification;
};

// Fit of a finite-size quantity against N, with the per-N data behind it.
struct ScalingRecord {
    std::string quantity; // "chi_max" or "g_max"
    double j_coupling{0.0};
    ScalingFit fit;
    std::vector<double> argmax;      // lambda at chi_max, or the optimal bias lambda0
    std::vector<double> t_at_max;    // g_max only
    std::vector<double> sqnr_at_max; // g_max only
    std::vector<bool> point_flagged;
};

struct QGridRecord {
    std::string phase; // preset name or "custom"
    std::size_t n_spins{0};
    std::size_t cutoff{0};
    ModelParams params;
    QFunctionGrid grid;
    std::vector<QPeak> peaks;
    double norm{0.0};
};

using Payload = std::variant<GroundRecord, ChiScan, ScalingRecord, TimeSeries, QGridRecord, MeanFieldRecord, OracleReport>;

struct ResultRecord {
    Payload payload;
    std::vector<std::string> failures; // any entry makes the run exit nonzero
    std::vector<std::string> warnings; // explicitly flagged, non-fatal

    bool failed() const { return !failures.empty(); }
};

inline std::string kind_of(const Payload& p) {
    static const char* names[] = {"ground", "chi_scan", "scaling_fit", "time_series", "q_grid", "mean_field", "oracle_report"};
    return names[p.index()];
}

namespace detail {

inline bool finite_all(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Flagger {
    ResultRecord& r;

    void fail(bool cond, const char* what) {
        if (cond) r.failures.emplace_back(what);
    }
    void warn(bool cond, const char* what) {
        if (cond) r.warnings.emplace_back(what);
    }

    void operator()(const GroundRecord& g) {
        const ObservableSet& o = g.point.obs;
        fail(!g.point.converged, "not_converged");
        fail(!finite_all({g.point.energy, o.zeta_S, o.zeta_Mx, o.zeta_My, o.m_z, o.n_mean, o.n_var, o.sz2}), "non_finite");
        warn(!g.point.cutoff_adequate, "cutoff_inadequate");
        warn(!std::isfinite(g.point.gap), "gap_unresolved");
    }
    void operator()(const ChiScan& s) {
        fail(!s.all_converged(), "not_converged");
        fail(!finite_all(s.chi) || !std::isfinite(s.chi_max), "non_finite");
        warn(std::find(s.cutoff_adequate.begin(), s.cutoff_adequate.end(), false) != s.cutoff_adequate.end(),
             "cutoff_inadequate");
    }
    void operator()(const ScalingRecord& s) {
        fail(!finite_all(s.fit.coefficients) || !std::isfinite(s.fit.r_squared), "non_finite");
        warn(std::find(s.point_flagged.begin(), s.point_flagged.end(), true) != s.point_flagged.end(), "point_flagged");
    }
    void operator()(const TimeSeries& t) {
        fail(!t.ground_converged, "not_converged");
        fail(!finite_all(t.n_mean) || !finite_all(t.gain), "non_finite");
        warn(!t.cutoff_adequate, "cutoff_inadequate");
        warn(t.gain_degenerate, "gain_degenerate");
        warn(t.sqnr_undefined, "sqnr_undefined");
    }
    void operator()(const QGridRecord& q) {
        fail(!finite_all(q.grid.values), "non_finite");
        warn(q.grid.beyond_cutoff_warning, "beyond_cutoff");
    }
    void operator()(const MeanFieldRecord& m) {
        fail(!std::isfinite(m.solution.energy_per_spin), "non_finite");
    }
    void operator()(const OracleReport& o) { fail(!o.pass, "case_failed"); }
};

} // namespace detail

inline ResultRecord make_record(Payload p) {
    ResultRecord r{std::move(p), {}, {}};
    std::visit(detail::Flagger{r}, r.payload);
    return r;
}

inline bool any_failed(const std::vector<ResultRecord>& records) {
    return std::any_of(records.begin(), records.end(), [](const ResultRecord& r) { return r.failed(); });
}

// ---------------------------------------------------------------------------
// JSON

inline json params_json(const ModelParams& p) {
    return {{"epsilon", p.epsilon}, {"lambda", p.lambda}, {"j", p.j_coupling}, {"omega0", p.omega0}};
}

inline json observables_json(const ObservableSet& o) {
    return {{"zeta_S", o.zeta_S}, {"zeta_Mx", o.zeta_Mx}, {"zeta_My", o.zeta_My}, {"m_z", o.m_z},
            {"n_mean", o.n_mean}, {"n_var", o.n_var},     {"sz2", o.sz2}};
}

// Non-finite numbers become null; the record's flags say why.
inline json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

inline json bools(const std::vector<bool>& v) {
    json a = json::array();
    for (bool b : v) a.push_back(b);
    return a;
}

namespace detail {

struct ToJson {
    json operator()(const GroundRecord& g) const {
        const PointResult& p = g.point;
        return {{"n", g.n_spins},
                {"cutoff", g.cutoff},
                {"params", params_json(g.params)},
                {"energy", num(p.energy)},
                {"gap", num(p.gap)},
                {"parity", num(p.parity)},
                {"residual", num(p.residual)},
                {"observables", observables_json(p.obs)},
                {"converged", p.converged},
                {"cutoff_adequate", p.cutoff_adequate},
                {"matvecs", p.matvecs}};
    }
    json operator()(const ChiScan& s) const {
        return {{"n", s.n_spins},
                {"fd_step", s.fd_step},
                {"lambdas", nums(s.lambdas)},
                {"zeta_S", nums(s.zeta_S)},
                {"n_mean", nums(s.n_mean)},
                {"chi", nums(s.chi)},
                {"converged", bools(s.converged)},
                {"cutoff_adequate", bools(s.cutoff_adequate)},
                {"chi_max", num(s.chi_max)},
                {"lambda_at_max", num(s.lambda_at_max)},
                {"chi_max_fd_step", s.chi_max_fd_step},
                {"refined", s.refined}};
    }
    json operator()(const ScalingRecord& s) const {
        return {{"quantity", s.quantity},
                {"j", s.j_coupling},
                {"model", fit_model_name(s.fit.model)},
                {"coefficients", nums(s.fit.coefficients)},
                {"r_squared", num(s.fit.r_squared)},
                {"n", nums(s.fit.xs)},
                {"value", nums(s.fit.ys)},
                {"argmax", nums(s.argmax)},
                {"t_at_max", nums(s.t_at_max)},
                {"sqnr_at_max", nums(s.sqnr_at_max)},
                {"point_flagged", bools(s.point_flagged)}};
    }
    json operator()(const TimeSeries& t) const {
        return {{"lambda0", t.lambda0},
                {"delta_lambda", t.delta_lambda},
                {"envelope_name", t.envelope},
                {"n0", num(t.n0)},
                {"energy0", num(t.energy0)},
                {"times", nums(t.times)},
                {"lambda_t", nums(t.lambda_t)},
                {"envelope", nums(t.envelope_t)},
                {"n_mean", nums(t.n_mean)},
                {"n_var", nums(t.n_var)},
                {"gain", nums(t.gain)},
                {"sqnr", nums(t.sqnr)},
                {"norm_drift", nums(t.norm_drift)}};
    }
    json operator()(const QGridRecord& q) const {
        json peaks = json::array();
        for (const QPeak& p : q.peaks) peaks.push_back({{q.grid.axis0_name, p.coord0}, {q.grid.axis1_name, p.coord1}, {"q", p.value}});
        return {{"target", q.grid.kind == QKind::boson ? "boson" : "spin"},
                {"phase", q.phase},
                {"n", q.n_spins},
                {"cutoff", q.cutoff},
                {"params", params_json(q.params)},
                {"prefactor", q.grid.prefactor},
                {"prefactor_included", q.grid.prefactor_included},
                {"normalization", num(q.norm)},
                {"peaks", peaks},
                {"axis0_name", q.grid.axis0_name},
                {"axis1_name", q.grid.axis1_name},
                {"axis0", nums(q.grid.axis0)},
                {"axis1", nums(q.grid.axis1)},
                {"values", nums(q.grid.values)}};
    }
    json operator()(const MeanFieldRecord& m) const {
        const MeanFieldSolution& s = m.solution;
        json partner = nullptr;
        if (s.degenerate_partner)
            partner = {{"alpha_re", s.degenerate_partner->alpha.real()},
                       {"alpha_im", s.degenerate_partner->alpha.imag()},
                       {"theta", s.degenerate_partner->theta},
                       {"phi", s.degenerate_partner->phi}};
        return {{"params", params_json(m.params)},
                {"phase", phase_name(s.phase)},
                {"label", m.classification.label},
                {"energy_per_spin", num(s.energy_per_spin)},
                {"alpha_re", s.alpha.real()},
                {"alpha_im", s.alpha.imag()},
                {"theta", s.theta},
                {"phi", s.phi},
                {"zeta_S", s.zeta_S()},
                {"zeta_Mx", s.zeta_Mx()},
                {"zeta_My", s.zeta_My()},
                {"m_z", s.m_z()},
                {"degenerate_partner", partner},
                {"iterations", s.iterations}};
    }
    json operator()(const OracleReport& o) const {
        return {{"case_id", o.case_id},
                {"quantity", o.quantity},
                {"reference", num(o.reference)},
                {"provenance", provenance_name(o.provenance)},
                {"computed", num(o.computed)},
                {"abs_deviation", num(o.abs_deviation)},
                {"rel_deviation", num(o.rel_deviation)},
                {"check", check_name(o.check)},
                {"tolerance", o.tolerance},
                {"pass", o.pass},
                {"note", o.note}};
    }
};

} // namespace detail

inline json to_json(const ResultRecord& r) {
    return {{"kind", kind_of(r.payload)},
            {"failed", r.failed()},
            {"failures", r.failures},
            {"warnings", r.warnings},
            {"data", std::visit(detail::ToJson{}, r.payload)}};
}

inline json document(const std::string& command, const std::vector<ResultRecord>& records) {
    json recs = json::array();
    for (const auto& r : records) recs.push_back(to_json(r));
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"failed", any_failed(records)}, {"records", recs}};
}

// ---------------------------------------------------------------------------
// Flat tables for CSV

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    struct V {
        std::string operator()(double x) const { return format_number(x); }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string out = "\"";
            for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return out + "\"";
        }
    };
    return std::visit(V{}, c);
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

// Documented column order per record kind.
inline std::vector<std::string> csv_columns(const std::string& kind) {
    if (kind == "ground")
        return {"n", "cutoff", "epsilon", "lambda", "j", "omega0", "energy", "gap", "parity", "residual", "zeta_S",
                "zeta_Mx", "zeta_My", "m_z", "n_mean", "n_var", "sz2", "converged", "cutoff_adequate"};
    if (kind == "chi_scan") return {"n", "fd_step", "lambda", "zeta_S", "n_mean", "chi", "converged", "cutoff_adequate"};
    if (kind == "scaling_fit") return {"quantity", "j", "n", "value", "fit", "argmax", "t_at_max", "sqnr_at_max", "flagged"};
    if (kind == "time_series") return {"t", "lambda", "envelope", "n_mean", "n_var", "gain", "sqnr", "norm_drift"};
    if (kind == "q_grid") return {"target", "axis0", "axis1", "q"};
    if (kind == "mean_field")
        return {"epsilon", "lambda", "j", "omega0", "phase", "label", "energy_per_spin", "alpha_re", "alpha_im", "theta",
                "phi", "zeta_S", "zeta_Mx", "zeta_My", "m_z"};
    if (kind == "oracle_report")
        return {"case_id", "quantity", "reference", "provenance", "computed", "abs_deviation", "rel_deviation", "check",
                "tolerance", "pass"};
    throw std::invalid_argument("csv_columns: unknown kind '" + kind + "'");
}

namespace detail {

inline double at_or_nan(const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
}

struct ToRows {
    std::vector<std::vector<Cell>>& rows;

    void operator()(const GroundRecord& g) const {
        const PointResult& p = g.point;
        const ObservableSet& o = p.obs;
        rows.push_back({static_cast<long long>(g.n_spins), static_cast<long long>(g.cutoff), g.params.epsilon, g.params.lambda,
                        g.params.j_coupling, g.params.omega0, p.energy, p.gap, p.parity, p.residual, o.zeta_S, o.zeta_Mx,
                        o.zeta_My, o.m_z, o.n_mean, o.n_var, o.sz2, p.converged, p.cutoff_adequate});
    }
    void operator()(const ChiScan& s) const {
        for (std::size_t i = 0; i < s.lambdas.size(); ++i)
            rows.push_back({static_cast<long long>(s.n_spins), s.fd_step, s.lambdas[i], s.zeta_S[i], s.n_mean[i], s.chi[i],
                            static_cast<bool>(s.converged[i]), static_cast<bool>(s.cutoff_adequate[i])});
    }
    void operator()(const ScalingRecord& s) const {
        for (std::size_t i = 0; i < s.fit.xs.size(); ++i)
            rows.push_back({s.quantity, s.j_coupling, static_cast<long long>(std::llround(s.fit.xs[i])), s.fit.ys[i],
                            s.fit.evaluate(s.fit.xs[i]), at_or_nan(s.argmax, i), at_or_nan(s.t_at_max, i),
                            at_or_nan(s.sqnr_at_max, i), i < s.point_flagged.size() && s.point_flagged[i]});
    }
    void operator()(const TimeSeries& t) const {
        for (std::size_t i = 0; i < t.times.size(); ++i)
            rows.push_back({t.times[i], t.lambda_t[i], t.envelope_t[i], t.n_mean[i], t.n_var[i], t.gain[i], t.sqnr[i], t.norm_drift[i]});
    }
    void operator()(const QGridRecord& q) const {
        const std::string target = q.grid.kind == QKind::boson ? "boson" : "spin";
        for (std::size_t i = 0; i < q.grid.axis0.size(); ++i)
            for (std::size_t j = 0; j < q.grid.axis1.size(); ++j) rows.push_back({target, q.grid.axis0[i], q.grid.axis1[j], q.grid.at(i, j)});
    }
    void operator()(const MeanFieldRecord& m) const {
        const MeanFieldSolution& s = m.solution;
        rows.push_back({m.params.epsilon, m.params.lambda, m.params.j_coupling, m.params.omega0, phase_name(s.phase),
                        m.classification.label, s.energy_per_spin, s.alpha.real(), s.alpha.imag(), s.theta, s.phi, s.zeta_S(),
                        s.zeta_Mx(), s.zeta_My(), s.m_z()});
    }
    void operator()(const OracleReport& o) const {
        rows.push_back({o.case_id, o.quantity, o.reference, provenance_name(o.provenance), o.computed, o.abs_deviation,
                        o.rel_deviation, check_name(o.check), o.tolerance, o.pass});
    }
};

} // namespace detail

// All records must share one kind; CSV is a single flat table.
inline Table to_table(const std::vector<ResultRecord>& records) {
    if (records.empty()) return {};
    const std::string kind = kind_of(records.front().payload);
    Table t{csv_columns(kind), {}};
    for (const auto& r : records) {
        if (kind_of(r.payload) != kind) throw std::invalid_argument("to_table: mixed record kinds cannot share one CSV table");
        std::visit(detail::ToRows{t.rows}, r.payload);
    }
    return t;
}

} // namespace qcd::cli
