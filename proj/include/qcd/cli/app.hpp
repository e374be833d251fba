// app.hpp: the qcd command-line front end (subcommands, output and manifests).

#pragma once

#include "qcd/cli/config.hpp"
#include "qcd/cli/manifest.hpp"
#include "qcd/cli/records.hpp"
#include "qcd/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qcd::cli {

enum ExitCode : int { kOk = 0, kFlagged = 1, kUsage = 2, kError = 3 };

struct ModelFlags {
    std::size_t n{4};
    long long cutoff{-1}; // -1: same as n
    double epsilon{1.0};
    double lambda{0.0};
    double j{0.0};
    double omega0{1.0};

    std::size_t fock() const { return cutoff < 0 ? n : static_cast<std::size_t>(cutoff); }
    ModelParams params() const {
        ModelParams p{epsilon, lambda, j, omega0};
        p.validate();
        return p;
    }
};

struct SolverFlags {
    double tol{1e-10};
    std::size_t max_iter{20000};
    std::size_t krylov_dim{300};

    SolverOptions options() const { return {tol, max_iter, krylov_dim}; }
};

struct OutputFlags {
    std::string format{"json"};
    std::string out;
    std::string manifest;
    std::size_t jobs{default_jobs()};
    bool verbose{false};
};

struct QuenchFlags {
    double dlambda{0.01};
    std::string envelope{"tanh_ramp"};
    double tau{10.0};
    std::string envelope_file;
    double t_final{60.0};
    double dt{0.005};
    std::size_t stride{200};
    std::string method{"rk4"};

    QuenchSetup setup(const ModelParams& p, const SolverOptions& solver) const {
        QuenchSetup s;
        s.params = p;
        s.delta_lambda = dlambda;
        s.envelope = envelope_file.empty() ? make_envelope(envelope, tau) : Envelope{read_envelope_table(envelope_file)};
        s.evolution.t_final = t_final;
        s.evolution.dt = dt;
        s.evolution.record_stride = stride;
        if (method == "rk4") s.evolution.method = Integrator::rk4;
        else if (method == "krylov") s.evolution.method = Integrator::krylov_expm;
        else throw std::invalid_argument("unknown --method '" + method + "' (rk4 or krylov)");
        s.solver = solver;
        return s;
    }
};

inline json basis_json(std::size_t n, std::size_t m) {
    const BasisSpec b = make_basis(n, m);
    return {{"n_spins", n}, {"fock_cutoff", m}, {"dim", b.dim()}, {"ordering", "boson-major, flat = n_boson * (N+1) + m_index"}};
}

inline json solver_json(const SolverOptions& s) {
    return {{"tol", s.tol}, {"max_iter", s.max_iter}, {"krylov_dim", s.krylov_dim}};
}

// One subcommand run: records plus the manifest pieces it fills in.
struct RunContext {
    RunManifest manifest;
    std::ostream* log{nullptr};

    void say(const std::string& msg) const {
        if (log) *log << msg << std::endl;
    }
};

using Handler = std::function<std::vector<ResultRecord>(RunContext&)>;

class Application {
public:
    Application() : app_("qcd: exact diagonalization and quench dynamics of the Dicke-LMG spin-boson model", "qcd") {
        app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app_.require_subcommand(1);
        app_.set_version_flag("--version", kArtifactVersion);
        add_ground();
        add_sweep();
        add_chi();
        add_scale();
        add_evolve();
        add_husimi();
        add_meanfield();
        add_validate();
    }

    // args excludes the program name. Returns the process exit code.
    int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& argv0 = "qcd") {
        std::vector<std::string> expanded;
        try {
            expanded = expand_config(args);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kUsage;
        }
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        try {
            app_.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app_.exit(e, out, err);
            return code == 0 ? kOk : kUsage;
        }

        CLI::App* sub = app_.get_subcommands().front();
        RunContext ctx;
        ctx.log = output_.verbose ? &err : nullptr;
        ctx.manifest.subcommand = sub->get_name();
        ctx.manifest.command_line = argv0;
        for (const auto& a : args) ctx.manifest.command_line += " " + a;
        ctx.manifest.parameters = resolved_parameters(*sub);

        const std::string manifest_path =
            !output_.manifest.empty() ? output_.manifest : (output_.out.empty() ? std::string() : output_.out + ".manifest.json");
        const auto t0 = std::chrono::steady_clock::now();
        int code = kOk;
        try {
            if (output_.format != "json" && output_.format != "csv")
                throw std::invalid_argument("unknown --format '" + output_.format + "' (json or csv)");
            const std::vector<ResultRecord> records = handlers_.at(sub->get_name())(ctx);
            write_records(sub->get_name(), records, out);
            if (!output_.out.empty()) ctx.manifest.add_output(output_.out);
            ctx.manifest.failed = any_failed(records);
            code = ctx.manifest.failed ? kFlagged : kOk;
            if (ctx.manifest.failed) err << "flagged: at least one record carries a failure flag\n";
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            ctx.manifest.failed = true;
            ctx.manifest.error = e.what();
            code = kError;
        }
        ctx.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!manifest_path.empty()) {
            try {
                ctx.manifest.write(manifest_path);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << '\n';
                code = kError;
            }
        }
        return code;
    }

private:
    CLI::App app_;
    std::map<std::string, Handler> handlers_;
    ModelFlags model_;
    SolverFlags solver_;
    OutputFlags output_;
    QuenchFlags quench_;

    static json resolved_parameters(const CLI::App& sub) {
        json p = json::object();
        std::istringstream in(sub.config_to_str(true, false));
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string v = trim(line.substr(eq + 1));
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
            p[trim(line.substr(0, eq))] = v;
        }
        return p;
    }

    void write_records(const std::string& command, const std::vector<ResultRecord>& records, std::ostream& out) const {
        std::ofstream file;
        if (!output_.out.empty()) {
            file.open(output_.out);
            if (!file) throw std::runtime_error("cannot write '" + output_.out + "'");
        }
        std::ostream& os = output_.out.empty() ? out : file;
        if (output_.format == "csv") write_csv(os, to_table(records));
        else os << document(command, records).dump(2) << '\n';
    }

    CLI::App* subcommand(const std::string& name, const std::string& help, const std::string& out_names = "--out") {
        CLI::App* s = app_.add_subcommand(name, help);
        s->add_option("--config", "key = value file mirroring the long flags; explicit flags win");
        s->add_option("--format", output_.format, "json (nested records) or csv (flat table)")->capture_default_str();
        s->add_option(out_names, output_.out, "data file (default: stdout)");
        s->add_option("--manifest", output_.manifest, "manifest file (default: <out>.manifest.json when --out is set)");
        s->add_option("--jobs", output_.jobs, "worker threads (default: QCD_JOBS or all cores)")->capture_default_str();
        s->add_flag("--verbose", output_.verbose, "progress on stderr");
        return s;
    }

    void model_flags(CLI::App* s, bool with_size = true) {
        if (with_size) {
            s->add_option("--n", model_.n, "number of spins N")->capture_default_str()->check(CLI::PositiveNumber);
            s->add_option("--cutoff", model_.cutoff, "maximum boson occupancy M (default: N)");
        }
        s->add_option("--epsilon", model_.epsilon, "spin splitting")->capture_default_str();
        s->add_option("--lambda", model_.lambda, "spin-boson coupling")->capture_default_str();
        s->add_option("--j", model_.j, "S_y^2 interaction J")->capture_default_str();
        s->add_option("--omega0", model_.omega0, "boson frequency")->capture_default_str();
    }

    void solver_flags(CLI::App* s) {
        s->add_option("--tol", solver_.tol, "Lanczos residual tolerance")->capture_default_str();
        s->add_option("--max-iter", solver_.max_iter, "Lanczos matrix-vector budget")->capture_default_str();
        s->add_option("--krylov-dim", solver_.krylov_dim, "Lanczos restart length")->capture_default_str();
    }

    void quench_flags(CLI::App* s) {
        s->add_option("--dlambda", quench_.dlambda, "quench amplitude")->capture_default_str();
        s->add_option("--envelope", quench_.envelope, "tanh_ramp, exp_saturation or sin2_ramp")->capture_default_str();
        s->add_option("--tau", quench_.tau, "envelope time constant")->capture_default_str();
        s->add_option("--envelope-file", quench_.envelope_file, "tabulated envelope: lines 't P'");
        s->add_option("--t-final", quench_.t_final, "evolution time")->capture_default_str();
        s->add_option("--dt", quench_.dt, "time step bound")->capture_default_str();
        s->add_option("--stride", quench_.stride, "steps between recorded samples")->capture_default_str();
        s->add_option("--method", quench_.method, "rk4 or krylov")->capture_default_str();
    }

    GroundRecord ground_at(const BasisSpec& b, const ModelParams& p) const {
        return {b.n_spins(), b.fock_cutoff(), p, solve_point(b, p, solver_.options())};
    }

    void set_basis(RunContext& ctx) const {
        ctx.manifest.basis = basis_json(model_.n, model_.fock());
        ctx.manifest.solver = solver_json(solver_.options());
    }

    void add_ground() {
        CLI::App* s = subcommand("ground", "ground state energy, gap and order parameters at one point");
        model_flags(s);
        solver_flags(s);
        handlers_["ground"] = [this](RunContext& ctx) {
            set_basis(ctx);
            const BasisSpec b = make_basis(model_.n, model_.fock());
            return std::vector<ResultRecord>{make_record(ground_at(b, model_.params()))};
        };
    }

    struct SweepFlags {
        std::string axis{"lambda"};
        double from{0.0}, to{1.0};
        std::size_t steps{11};
        double j_from{0.0}, j_to{1.2};
        std::size_t j_steps{13};
    } sweep_;

    void add_sweep() {
        CLI::App* s = subcommand("sweep", "ground-state observables along lambda, J, or on a (lambda, J) grid");
        model_flags(s);
        solver_flags(s);
        s->add_option("--axis", sweep_.axis, "lambda, j or grid")->capture_default_str();
        s->add_option("--from", sweep_.from, "first value of the swept parameter (lambda for grid)")->capture_default_str();
        s->add_option("--to", sweep_.to, "last value")->capture_default_str();
        s->add_option("--steps", sweep_.steps, "number of points (a zero-length range gives one)")->capture_default_str();
        s->add_option("--j-from", sweep_.j_from, "grid: first J")->capture_default_str();
        s->add_option("--j-to", sweep_.j_to, "grid: last J")->capture_default_str();
        s->add_option("--j-steps", sweep_.j_steps, "grid: number of J values")->capture_default_str();
        handlers_["sweep"] = [this](RunContext& ctx) {
            set_basis(ctx);
            const ModelParams base = model_.params();
            std::vector<ModelParams> points;
            const auto xs = linspace(sweep_.from, sweep_.to, sweep_.steps);
            if (sweep_.axis == "lambda") {
                for (double x : xs) points.push_back(base.with_lambda(x));
            } else if (sweep_.axis == "j") {
                for (double x : xs) points.push_back(base.with_j(x));
            } else if (sweep_.axis == "grid") {
                for (double jv : linspace(sweep_.j_from, sweep_.j_to, sweep_.j_steps))
                    for (double x : xs) points.push_back(base.with_j(jv).with_lambda(x));
            } else {
                throw std::invalid_argument("unknown --axis '" + sweep_.axis + "' (lambda, j or grid)");
            }
            const BasisSpec b = make_basis(model_.n, model_.fock());
            ctx.say("sweep: " + std::to_string(points.size()) + " points, dim " + std::to_string(b.dim()));
            const auto rows = parallel_map(points.size(), output_.jobs, [&](std::size_t i) { return ground_at(b, points[i]); });
            std::vector<ResultRecord> out;
            for (const auto& r : rows) out.push_back(make_record(r));
            return out;
        };
    }

    struct ChiFlags {
        double from{0.6}, to{0.8};
        std::size_t steps{21};
        double fd_step{1e-3};
        std::size_t refine{0};
    } chi_;

    void add_chi() {
        CLI::App* s = subcommand("chi", "sensitivity chi = (1/N) d<n>/d lambda on a lambda grid");
        model_flags(s);
        solver_flags(s);
        s->add_option("--from", chi_.from, "first lambda")->capture_default_str();
        s->add_option("--to", chi_.to, "last lambda")->capture_default_str();
        s->add_option("--steps", chi_.steps, "number of lambda values")->capture_default_str();
        s->add_option("--fd-step", chi_.fd_step, "central-difference step")->capture_default_str();
        s->add_option("--refine", chi_.refine, "golden-section refinements of the peak (0: grid only)")->capture_default_str();
        handlers_["chi"] = [this](RunContext& ctx) {
            set_basis(ctx);
            ChiScanOptions opt;
            opt.fd_step = chi_.fd_step;
            opt.refine_iterations = chi_.refine;
            opt.solver = solver_.options();
            opt.jobs = output_.jobs;
            const BasisSpec b = make_basis(model_.n, model_.fock());
            return std::vector<ResultRecord>{make_record(chi_scan(b, model_.params(), linspace(chi_.from, chi_.to, chi_.steps), opt))};
        };
    }

    struct ScaleFlags {
        std::string quantity{"chi_max"};
        std::string n_list{"20,30,40,50,60,70,80"};
        double window{0.1};
        double spacing{0.01};
        std::size_t refine{14};
        double fd_step{1e-3};
    } scale_;

    void add_scale() {
        CLI::App* s = subcommand("scale", "finite-size scaling of chi_max (quadratic fit) or g_max and SQNR (linear fits)");
        model_flags(s, false);
        solver_flags(s);
        quench_flags(s);
        s->add_option("--quantity", scale_.quantity, "chi_max or g_max")->capture_default_str();
        s->add_option("--n-list", scale_.n_list, "comma-separated N values; the cutoff is M = N")->capture_default_str();
        s->add_option("--window", scale_.window, "half-width of the chi search window around the mean-field lambda_c")->capture_default_str();
        s->add_option("--spacing", scale_.spacing, "coarse chi grid spacing")->capture_default_str();
        s->add_option("--refine", scale_.refine, "golden-section refinements of the chi peak")->capture_default_str();
        s->add_option("--fd-step", scale_.fd_step, "central-difference step")->capture_default_str();
        handlers_["scale"] = [this](RunContext& ctx) {
            const ModelParams p = model_.params();
            const std::vector<std::size_t> ns = parse_size_list(scale_.n_list);
            ctx.manifest.basis = {{"n_list", ns}, {"fock_cutoff", "M = N"}};
            ctx.manifest.solver = solver_json(solver_.options());
            std::vector<double> xs(ns.begin(), ns.end());
            if (scale_.quantity == "chi_max") return scale_chi(ctx, p, ns, xs);
            if (scale_.quantity == "g_max") return scale_gain(ctx, p, ns, xs);
            throw std::invalid_argument("unknown --quantity '" + scale_.quantity + "' (chi_max or g_max)");
        };
    }

    std::vector<ResultRecord> scale_chi(RunContext& ctx, const ModelParams& p, const std::vector<std::size_t>& ns,
                                        const std::vector<double>& xs) const {
        const double lc = mean_field_lambda_c(p);
        ScalingRecord r{"chi_max", p.j_coupling, {}, {}, {}, {}, {}};
        std::vector<double> ys;
        for (std::size_t n : ns) {
            const ChiScan c = locate_chi_peak(make_basis(n, n), p, lc - scale_.window, lc + scale_.window, scale_.spacing,
                                              scale_.fd_step, scale_.refine, solver_.options(), output_.jobs);
            ctx.say("  N=" + std::to_string(n) + " chi_max=" + fmt(c.chi_max) + " at lambda=" + fmt(c.lambda_at_max));
            ys.push_back(c.chi_max);
            r.argmax.push_back(c.lambda_at_max);
            r.point_flagged.push_back(!c.all_converged());
        }
        r.fit = fit_scaling(xs, ys, FitModel::quadratic);
        return {make_record(r)};
    }

    std::vector<ResultRecord> scale_gain(RunContext& ctx, const ModelParams& p, const std::vector<std::size_t>& ns,
                                         const std::vector<double>& xs) const {
        const QuenchSetup setup = quench_.setup(p, solver_.options());
        GainScalingOptions opt;
        opt.chi_window = scale_.window;
        opt.chi_spacing = scale_.spacing;
        opt.chi_refine = scale_.refine;
        opt.jobs = output_.jobs;
        ScalingRecord g{"g_max", p.j_coupling, {}, {}, {}, {}, {}};
        std::vector<double> gy, qy;
        for (std::size_t n : ns) {
            const GainScalingPoint pt = gain_scaling_point(n, setup, opt);
            const GainPeak& b = pt.bias.best;
            ctx.say("  N=" + std::to_string(n) + " lambda0=" + fmt(b.lambda0) + " g_max=" + fmt(b.g_max) + " t=" + fmt(b.t_at_max));
            gy.push_back(b.g_max);
            qy.push_back(b.sqnr_at_max);
            g.argmax.push_back(b.lambda0);
            g.t_at_max.push_back(b.t_at_max);
            g.sqnr_at_max.push_back(b.sqnr_at_max);
            g.point_flagged.push_back(b.flagged);
        }
        ScalingRecord q = g;
        q.quantity = "sqnr_at_max";
        g.fit = fit_scaling(xs, gy, FitModel::linear);
        q.fit = fit_scaling(xs, qy, FitModel::linear);
        return {make_record(g), make_record(q)};
    }

    double lambda0_{0.70};

    void add_evolve() {
        CLI::App* s = subcommand("evolve", "quench from the ground state at lambda0: g(t), SQNR(t) and <n>(t)");
        model_flags(s);
        solver_flags(s);
        quench_flags(s);
        s->add_option("--lambda0", lambda0_, "bias coupling")->capture_default_str();
        handlers_["evolve"] = [this](RunContext& ctx) {
            set_basis(ctx);
            const BasisSpec b = make_basis(model_.n, model_.fock());
            const QuenchSetup setup = quench_.setup(model_.params(), solver_.options());
            return std::vector<ResultRecord>{make_record(run_quench(b, setup, lambda0_))};
        };
    }

    struct HusimiFlags {
        std::string target{"boson"};
        std::string phase{"custom"};
        double half_width{0.0}; // 0: sqrt(M) + 3
        std::size_t points{201};
        std::size_t theta_points{181};
        std::size_t phi_points{360};
    } husimi_;

    void add_husimi() {
        CLI::App* s = subcommand("husimi", "Husimi Q-function of the ground state on a boson or spin grid");
        model_flags(s);
        solver_flags(s);
        s->add_option("--target", husimi_.target, "boson or spin")->capture_default_str();
        s->add_option("--phase", husimi_.phase, "PN (0.2, 0.2), FN (0.3, 1.0), FS (0.8, 0) or custom (use --lambda, --j)")
            ->capture_default_str();
        s->add_option("--half-width", husimi_.half_width, "boson grid half-width (default sqrt(M) + 3)");
        s->add_option("--points", husimi_.points, "boson grid points per axis")->capture_default_str();
        s->add_option("--theta-points", husimi_.theta_points, "spin grid theta points")->capture_default_str();
        s->add_option("--phi-points", husimi_.phi_points, "spin grid phi points")->capture_default_str();
        handlers_["husimi"] = [this](RunContext& ctx) {
            set_basis(ctx);
            ModelParams p = model_.params();
            static const std::map<std::string, std::pair<double, double>> presets{
                {"PN", {0.2, 0.2}}, {"FN", {0.3, 1.0}}, {"FS", {0.8, 0.0}}};
            if (husimi_.phase != "custom") {
                const auto it = presets.find(husimi_.phase);
                if (it == presets.end()) throw std::invalid_argument("unknown --phase '" + husimi_.phase + "'");
                p = p.with_lambda(it->second.first).with_j(it->second.second);
            }
            const BasisSpec b = make_basis(model_.n, model_.fock());
            const GroundState gs = ground_state(build_hamiltonian(b, p), b, solver_.options());
            QGridRecord r{husimi_.phase, b.n_spins(), b.fock_cutoff(), p, {}, {}, 0.0};
            if (husimi_.target == "boson") {
                const BosonGridSpec spec = husimi_.half_width > 0.0 ? BosonGridSpec::square(husimi_.half_width, husimi_.points)
                                                                    : BosonGridSpec::for_cutoff(b.fock_cutoff(), husimi_.points);
                r.grid = boson_q(gs.state, b, spec, output_.jobs);
            } else if (husimi_.target == "spin") {
                r.grid = spin_q(gs.state, b, SpinGridSpec{husimi_.theta_points, husimi_.phi_points}, output_.jobs);
            } else {
                throw std::invalid_argument("unknown --target '" + husimi_.target + "' (boson or spin)");
            }
            r.peaks = local_maxima(r.grid);
            r.norm = normalization(r.grid);
            std::vector<ResultRecord> out{make_record(r)};
            if (!gs.converged) out.front().failures.emplace_back("not_converged");
            return out;
        };
    }

    void add_meanfield() {
        CLI::App* s = subcommand("meanfield", "product-state minimizer and analytic phase label");
        model_flags(s, false);
        handlers_["meanfield"] = [this](RunContext& ctx) {
            const ModelParams p = model_.params();
            ctx.manifest.basis = "mean-field product state";
            return std::vector<ResultRecord>{make_record(MeanFieldRecord{p, minimize(p), classify(p)})};
        };
    }

    struct ValidateFlags {
        std::string scope{"all"};
        std::string figure{"none"};
        std::string scale{"desk"};
    } validate_;

    void add_validate() {
        CLI::App* s = subcommand("validate", "oracle suite and figure regressions; nonzero exit if any case fails", "--out,--report");
        s->add_option("--scope", validate_.scope, "all, none, or one of basis, hamiltonian, solver, observables, meanfield, criticality, husimi")
            ->capture_default_str();
        s->add_option("--figure", validate_.figure, "none, all, or one of fig2, fig3, fig4, fig5, figS1, figS2")->capture_default_str();
        s->add_option("--scale", validate_.scale, "desk (small N) or full (N up to 80)")->capture_default_str();
        handlers_["validate"] = [this](RunContext& ctx) {
            Reports reports;
            if (validate_.scope != "none") {
                ctx.say("oracle suite: " + validate_.scope);
                reports = run_oracle_suite(validate_.scope, output_.jobs);
            }
            if (validate_.figure != "none") {
                if (validate_.scale != "desk" && validate_.scale != "full")
                    throw std::invalid_argument("unknown --scale '" + validate_.scale + "' (desk or full)");
                const Scale sc = validate_.scale == "full" ? Scale::full : Scale::desk;
                std::vector<std::string> figs = validate_.figure == "all" ? figure_ids() : std::vector<std::string>{validate_.figure};
                for (const auto& f : figs) {
                    const Reports r = figure_regression(f, sc, output_.jobs, [&ctx](const std::string& m) { ctx.say(m); });
                    reports.insert(reports.end(), r.begin(), r.end());
                }
            }
            ctx.manifest.solver = solver_json(SolverOptions{});
            std::vector<ResultRecord> out;
            for (const auto& r : reports) out.push_back(make_record(r));
            return out;
        };
    }
};

} // namespace qcd::cli
