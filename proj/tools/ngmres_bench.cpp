// Command-line driver for the N-GMRES benchmark harness.
//
//   ngmres-bench run          single trial, convergence history
//   ngmres-bench table        multi-seed f/g evaluation table
//   ngmres-bench sweep-window window-size study for an N-GMRES method
//   ngmres-bench gradcheck    analytic vs finite-difference gradients
//   ngmres-bench gmres-equiv  N-GMRES-sd vs linear GMRES on a quadratic

#include "ngopt/harness.hpp"
#include "ngopt/problems.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct CommonOptions {
    std::vector<std::string> problems{"A"};
    std::vector<std::size_t> sizes{100};
    std::vector<std::string> methods;
    std::size_t window = 20;
    double delta = 1e-4;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    double fval_tol = 1e-6;
    std::size_t iter_cap = 0;
    std::size_t jobs = 1;
    std::string out;
    std::string format = "table";
    bool strict = false;
    bool strong_wolfe = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool multi) {
    if (multi) {
        cmd->add_option("--problem", o.problems, "problem tag(s) A..G")->delimiter(',');
        cmd->add_option("--n", o.sizes, "dimension(s)")->delimiter(',');
        cmd->add_option("--method", o.methods,
                        "method(s): ngmres-sdls, ngmres-sd, ncg, lbfgs, sdls")
            ->delimiter(',');
    } else {
        cmd->add_option("--problem", o.problems, "problem tag A..G")->expected(1);
        cmd->add_option("--n", o.sizes, "dimension")->expected(1);
        cmd->add_option("--method", o.methods, "ngmres-sdls, ngmres-sd, ncg, lbfgs, sdls")
            ->expected(1);
    }
    cmd->add_option("--window", o.window, "N-GMRES window size w");
    cmd->add_option("--delta", o.delta, "sd preconditioner step bound");
    cmd->add_option("--seed", o.seed, "first seed");
    cmd->add_option("--trials", o.trials, "trials per cell");
    cmd->add_option("--fval-tol", o.fval_tol, "stop when |f - f*| < tol");
    cmd->add_option("--iter-cap", o.iter_cap, "outer iteration cap (0: 1500 for A-C, 500 for D-G)");
    cmd->add_option("--jobs", o.jobs, "worker threads for independent trials");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv, json or table")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    cmd->add_flag("--strict", o.strict, "exit nonzero if any trial failed");
    cmd->add_flag("--strong-wolfe", o.strong_wolfe, "use the strong curvature condition");
}

ngopt::TrialConfig base_config(CommonOptions const& o) {
    ngopt::TrialConfig c;
    c.window_w = o.window;
    c.delta = o.delta;
    c.seed = o.seed;
    c.fval_tol = o.fval_tol;
    c.wolfe.strong_curvature = o.strong_wolfe;
    if (o.iter_cap > 0) {
        c.iter_cap = o.iter_cap;
    }
    return c;
}

std::vector<ngopt::ProblemKind> problem_rows(CommonOptions const& o) {
    std::vector<ngopt::ProblemKind> rows;
    for (auto const& p : o.problems) {
        for (std::size_t n : o.sizes) {
            rows.push_back({ngopt::parse_problem_tag(p), n, std::nullopt});
        }
    }
    return rows;
}

std::vector<ngopt::Method> selected_methods(CommonOptions const& o) {
    if (o.methods.empty()) {
        return ngopt::all_methods();
    }
    std::vector<ngopt::Method> out;
    for (auto const& m : o.methods) {
        out.push_back(ngopt::parse_method(m));
    }
    return out;
}

void emit(CommonOptions const& o, std::string const& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) {
        throw std::runtime_error("cannot open " + o.out);
    }
    f << text;
}

std::string summaries_csv(std::vector<ngopt::RunSummary> const& summaries) {
    std::ostringstream os;
    os << "problem,n,method,window,trials,converged,dnf,mean_fg_evals_to_tol\n";
    for (auto const& s : summaries) {
        os << ngopt::to_string(s.problem.tag) << ',' << s.problem.n << ','
           << ngopt::to_string(s.method) << ',' << s.window_w << ',' << s.trials << ','
           << s.converged << ',' << s.dnf_count << ',' << s.mean_fg_evals_to_tol << '\n';
    }
    return os.str();
}

bool any_failed(std::vector<ngopt::RunSummary> const& summaries) {
    for (auto const& s : summaries) {
        for (auto const& t : s.details) {
            if (t.status == ngopt::SolveStatus::Failed) {
                return true;
            }
        }
    }
    return false;
}

int emit_summaries(CommonOptions const& o, std::vector<ngopt::RunSummary> const& summaries,
                   std::string const& kind) {
    if (o.format == "json") {
        nlohmann::json j;
        j["kind"] = kind;
        j["manifest"] = ngopt::manifest_json(base_config(o), o.trials, o.seed);
        j["summaries"] = nlohmann::json::array();
        for (auto const& s : summaries) {
            j["summaries"].push_back(ngopt::to_json(s, true));
        }
        emit(o, j.dump(2) + "\n");
    } else if (o.format == "csv") {
        emit(o, summaries_csv(summaries));
    } else if (kind == "sweep-window") {
        std::ostringstream os;
        os << "w     mean_fg_evals  dnf\n";
        for (auto const& s : summaries) {
            os << s.window_w << std::string(6 - std::to_string(s.window_w).size(), ' ')
               << s.mean_fg_evals_to_tol << "  " << s.dnf_count << '\n';
        }
        emit(o, os.str());
    } else {
        emit(o, ngopt::summaries_to_table(summaries));
    }
    return o.strict && any_failed(summaries) ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-GMRES optimization benchmark harness"};
    app.require_subcommand(1);

    CommonOptions run_o;
    run_o.format = "csv";
    auto* run = app.add_subcommand("run", "single trial; writes the convergence history");
    add_common(run, run_o, false);

    CommonOptions table_o;
    auto* table = app.add_subcommand("table", "mean f/g evaluations to tolerance over seeds");
    add_common(table, table_o, true);

    CommonOptions sweep_o;
    sweep_o.methods = {"ngmres-sd"};
    std::vector<std::size_t> w_values{1, 2, 3, 5, 10, 20, 30};
    auto* sweep = app.add_subcommand("sweep-window", "window-size study");
    add_common(sweep, sweep_o, false);
    sweep->add_option("--w-values", w_values, "window sizes")->delimiter(',');

    CommonOptions grad_o;
    std::size_t grad_points = 20;
    double grad_h = 1e-6;
    auto* grad = app.add_subcommand("gradcheck", "analytic vs central-difference gradients");
    add_common(grad, grad_o, true);
    grad->add_option("--points", grad_points, "random points per problem");
    grad->add_option("--fd-step", grad_h, "finite-difference step");

    CommonOptions equiv_o;
    equiv_o.sizes = {10};
    auto* equiv = app.add_subcommand("gmres-equiv", "N-GMRES-sd vs linear GMRES residuals");
    add_common(equiv, equiv_o, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ngopt::TrialConfig cfg = base_config(run_o);
            cfg.problem = problem_rows(run_o).front();
            cfg.method = run_o.methods.empty() ? ngopt::Method::NGmresSd
                                               : ngopt::parse_method(run_o.methods.front());
            ngopt::TrialResult const t = ngopt::run_trial(cfg);
            if (run_o.format == "json") {
                nlohmann::json j = ngopt::to_json(t, true);
                j["manifest"] = ngopt::manifest_json(cfg, 1, cfg.seed);
                j["problem"] = ngopt::to_string(cfg.problem.tag);
                j["n"] = cfg.problem.n;
                j["method"] = ngopt::to_string(cfg.method);
                emit(run_o, j.dump(2) + "\n");
            } else if (run_o.format == "csv") {
                emit(run_o, ngopt::history_to_csv(t.history, t.f_star));
            } else {
                std::ostringstream os;
                os << ngopt::to_string(cfg.method) << " on " << ngopt::to_string(cfg.problem.tag)
                   << " n=" << cfg.problem.n << " seed=" << cfg.seed << ": "
                   << ngopt::to_string(t.status) << ", " << t.fg_evals << " f/g evals, f="
                   << t.final_f << ", |g|=" << t.final_gnorm << '\n';
                emit(run_o, os.str());
            }
            return run_o.strict && t.status == ngopt::SolveStatus::Failed ? 2 : 0;
        }
        if (*table) {
            auto const summaries =
                ngopt::run_table(problem_rows(table_o), selected_methods(table_o), table_o.trials,
                                 base_config(table_o), table_o.seed, table_o.jobs);
            return emit_summaries(table_o, summaries, "table");
        }
        if (*sweep) {
            auto const summaries = ngopt::run_window_sweep(
                problem_rows(sweep_o).front(), ngopt::parse_method(sweep_o.methods.front()),
                w_values, sweep_o.trials, base_config(sweep_o), sweep_o.seed, sweep_o.jobs);
            return emit_summaries(sweep_o, summaries, "sweep-window");
        }
        if (*grad) {
            if (grad_o.problems == std::vector<std::string>{"A"}) {
                grad_o.problems = {"A", "B", "C", "D", "E", "F", "G"};
            }
            std::ostringstream os;
            os << "problem,n,points,max_rel_error\n";
            for (auto const& kind : problem_rows(grad_o)) {
                auto const r = ngopt::gradient_check(kind, grad_points, grad_h, grad_o.seed);
                os << ngopt::to_string(kind.tag) << ',' << kind.n << ',' << r.points << ','
                   << r.max_rel_error << '\n';
            }
            emit(grad_o, os.str());
            return 0;
        }
        if (*equiv) {
            auto const report = ngopt::gmres_equivalence(equiv_o.sizes.front(), equiv_o.seed);
            std::ostringstream os;
            os << "iter,ngmres_residual,gmres_residual,step_kind\n";
            os.precision(17);
            for (auto const& r : report.rows) {
                os << r.iter << ',' << r.ngmres_residual << ',' << r.oracle_residual << ','
                   << ngopt::to_string(r.kind) << '\n';
            }
            os << "# max_rel_diff=" << report.max_rel_diff << " restarts=" << report.restarts
               << '\n';
            emit(equiv_o, os.str());
            return 0;
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
