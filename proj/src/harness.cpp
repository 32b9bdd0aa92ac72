#include "ngopt/harness.hpp"

#include "ngopt/baselines.hpp"
#include "ngopt/ngmres.hpp"
#include "ngopt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace ngopt {

char const* to_string(Method m) noexcept {
    switch (m) {
    case Method::NGmresSdls: return "ngmres-sdls";
    case Method::NGmresSd: return "ngmres-sd";
    case Method::Ncg: return "ncg";
    case Method::Lbfgs: return "lbfgs";
    case Method::Sdls: return "sdls";
    }
    return "unknown";
}

Method parse_method(std::string const& s) {
    for (Method m : all_methods()) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown method '" + s + "'");
}

std::vector<Method> all_methods() {
    return {Method::NGmresSdls, Method::NGmresSd, Method::Ncg, Method::Lbfgs, Method::Sdls};
}

std::size_t default_iter_cap(ProblemTag tag) noexcept {
    switch (tag) {
    case ProblemTag::A:
    case ProblemTag::B:
    case ProblemTag::C: return 1500;
    default: return 500;
    }
}

Point initial_guess(std::size_t n, std::uint64_t seed) {
    Rng rng(seed, RngStream::InitialGuess);
    return rng.uniform_vector(static_cast<Eigen::Index>(n));
}

// ------------------------------ Reference f* --------------------------------

namespace {

double penalty_reference(std::size_t n) {
    auto obj = make_problem({ProblemTag::G, n, std::nullopt});
    Point const x0 = initial_guess(n, 0);

    LbfgsConfig lcfg;
    lcfg.max_iters = 20000;
    lcfg.grad_tol = 1e-13;
    EvalCounter c1;
    SolveResult const lb = lbfgs_solve(*obj, lcfg, x0, c1);

    NcgConfig ncfg;
    ncfg.max_iters = 20000;
    ncfg.grad_tol = 1e-13;
    EvalCounter c2;
    SolveResult const cg = ncg_solve(*obj, ncfg, x0, c2);

    if (!(std::abs(lb.f - cg.f) <= 1e-10)) {
        std::ostringstream os;
        os << "problem G reference runs disagree: L-BFGS f=" << lb.f << ", N-CG f=" << cg.f;
        throw Error(os.str());
    }
    return std::min(lb.f, cg.f);
}

} // namespace

double reference_f_star(ProblemKind const& kind) {
    if (kind.tag != ProblemTag::G) {
        ProblemKind k = kind;
        if (k.tag == ProblemTag::C && !k.seed) {
            k.seed = 0;
        }
        auto const opt = make_problem(k)->known_optimum();
        return opt->f;
    }
    static std::mutex mutex;
    static std::map<std::size_t, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(kind.n);
    if (it == cache.end()) {
        it = cache.emplace(kind.n, penalty_reference(kind.n)).first;
    }
    return it->second;
}

// -------------------------------- Trials ------------------------------------

TrialResult run_trial(TrialConfig const& cfg) {
    ProblemKind kind = cfg.problem;
    if (kind.tag == ProblemTag::C && !kind.seed) {
        kind.seed = cfg.seed;
    }
    auto const obj = make_problem(kind);

    TrialResult out;
    out.seed = cfg.seed;
    out.x0 = initial_guess(kind.n, cfg.seed);
    out.f_star = reference_f_star(kind);

    FvalTolerance const fval{out.f_star, cfg.fval_tol};
    std::size_t const cap = cfg.iter_cap.value_or(default_iter_cap(kind.tag));

    EvalCounter counter;
    SolveResult res;
    try {
        switch (cfg.method) {
        case Method::NGmresSdls:
        case Method::NGmresSd: {
            NGmresConfig nc;
            nc.window_w = cfg.window_w;
            nc.max_iters = cap;
            nc.grad_tol = cfg.grad_floor;
            nc.fval_tol = fval;
            nc.wolfe = cfg.wolfe;
            if (cfg.method == Method::NGmresSdls) {
                SteepestDescentLineSearch const pre(cfg.wolfe);
                res = ngmres_solve(*obj, pre, nc, out.x0, counter);
            } else {
                SteepestDescentFixedStep const pre(SdParams{cfg.delta});
                res = ngmres_solve(*obj, pre, nc, out.x0, counter);
            }
            break;
        }
        case Method::Ncg:
        case Method::Sdls:
        case Method::Lbfgs: {
            LbfgsConfig bc;
            bc.wolfe = cfg.wolfe;
            bc.max_iters = cap;
            bc.grad_tol = cfg.grad_floor;
            bc.fval_tol = fval;
            bc.memory_m = cfg.lbfgs_memory;
            if (cfg.method == Method::Ncg) {
                res = ncg_solve(*obj, bc, out.x0, counter);
            } else if (cfg.method == Method::Sdls) {
                res = steepest_descent_solve(*obj, bc, out.x0, counter);
            } else {
                res = lbfgs_solve(*obj, bc, out.x0, counter);
            }
            break;
        }
        }
    } catch (Error const& e) {
        res.status = SolveStatus::Failed;
        res.message = e.what();
    }

    out.history = std::move(res.history);
    out.status = res.status;
    out.message = std::move(res.message);
    out.converged = res.status == SolveStatus::FvalTol;
    out.fg_evals = counter.fg_evals;
    out.final_f = res.f;
    out.final_gnorm = res.g.size() > 0 ? res.g.norm() : std::nan("");
    return out;
}

RunSummary summarize(ProblemKind const& problem, Method method, std::size_t window_w,
                     std::vector<TrialResult> trials) {
    std::sort(trials.begin(), trials.end(),
              [](TrialResult const& a, TrialResult const& b) { return a.seed < b.seed; });
    RunSummary s;
    s.problem = problem;
    s.method = method;
    s.window_w = window_w;
    s.trials = trials.size();
    double conv_sum = 0.0;
    double all_sum = 0.0;
    for (auto const& t : trials) {
        all_sum += double(t.fg_evals);
        if (t.converged) {
            ++s.converged;
            conv_sum += double(t.fg_evals);
        } else {
            ++s.dnf_count;
        }
    }
    s.mean_fg_evals_to_tol = s.converged > 0 ? conv_sum / double(s.converged) : std::nan("");
    s.mean_fg_evals_incl_dnf = s.trials > 0 ? all_sum / double(s.trials) : std::nan("");
    s.details = std::move(trials);
    return s;
}

namespace {

std::vector<TrialResult> run_trials(std::vector<TrialConfig> const& configs, std::size_t jobs) {
    std::vector<TrialResult> results(configs.size());
    if (jobs <= 1 || configs.size() <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            results[i] = run_trial(configs[i]);
        }
        return results;
    }
    // Warm the G reference cache once instead of racing on it.
    for (auto const& c : configs) {
        if (c.problem.tag == ProblemTag::G) {
            reference_f_star(c.problem);
        }
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            results[i] = run_trial(configs[i]);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, configs.size()); ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    return results;
}

std::vector<TrialConfig> seeded_configs(TrialConfig const& base, ProblemKind const& problem,
                                        Method method, std::size_t trials, std::uint64_t seed0) {
    std::vector<TrialConfig> out;
    for (std::size_t k = 0; k < trials; ++k) {
        TrialConfig c = base;
        c.problem = problem;
        c.method = method;
        c.seed = seed0 + k;
        out.push_back(c);
    }
    return out;
}

} // namespace

std::vector<RunSummary> run_table(std::vector<ProblemKind> const& problems,
                                  std::vector<Method> const& methods, std::size_t trials,
                                  TrialConfig const& base, std::uint64_t seed0,
                                  std::size_t jobs) {
    if (trials == 0) {
        throw std::invalid_argument("a table needs at least one trial");
    }
    std::vector<RunSummary> out;
    for (auto const& p : problems) {
        for (Method m : methods) {
            auto results = run_trials(seeded_configs(base, p, m, trials, seed0), jobs);
            out.push_back(summarize(p, m, base.window_w, std::move(results)));
        }
    }
    return out;
}

std::vector<RunSummary> run_window_sweep(ProblemKind const& problem, Method method,
                                         std::vector<std::size_t> const& w_values,
                                         std::size_t trials, TrialConfig const& base,
                                         std::uint64_t seed0, std::size_t jobs) {
    if (method != Method::NGmresSd && method != Method::NGmresSdls) {
        throw std::invalid_argument("window sweep needs an N-GMRES method");
    }
    if (trials == 0) {
        throw std::invalid_argument("a sweep needs at least one trial");
    }
    std::vector<RunSummary> out;
    for (std::size_t w : w_values) {
        TrialConfig b = base;
        b.window_w = w;
        auto results = run_trials(seeded_configs(b, problem, method, trials, seed0), jobs);
        out.push_back(summarize(problem, method, w, std::move(results)));
    }
    return out;
}

// ------------------------------- Exports ------------------------------------

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::string problem_label(ProblemKind const& p) {
    return std::string(to_string(p.tag)) + " n=" + std::to_string(p.n);
}

} // namespace

std::string history_to_csv(ConvergenceHistory const& history, std::optional<double> f_star) {
    std::ostringstream os;
    os << "iter,fg_evals,f,log10_abs_f_err,gnorm2,gnorminf,step_kind\n";
    for (auto const& r : history.iterations) {
        double const err =
            f_star ? std::log10(std::abs(r.f_value - *f_star)) : std::nan("");
        os << r.iter_index << ',' << r.fg_evals_cumulative << ',' << fmt_double(r.f_value) << ','
           << fmt_double(err) << ',' << fmt_double(r.grad_norm_2) << ','
           << fmt_double(r.grad_norm_inf) << ',' << to_string(r.step_kind) << '\n';
    }
    return os.str();
}

nlohmann::json manifest_json(TrialConfig const& base, std::size_t trials, std::uint64_t seed0) {
    nlohmann::json seeds = nlohmann::json::array();
    for (std::size_t k = 0; k < trials; ++k) {
        seeds.push_back(seed0 + k);
    }
    return {
        {"rng", kRngId},
        {"seeds", seeds},
        {"initial_guess", "uniform [0,1]^n, stream InitialGuess"},
        {"problem_c_matrix", "Q of QR(uniform [0,1]^{n x n}), diag(R) >= 0, stream ProblemMatrix, instance seed = trial seed"},
        {"window_w", base.window_w},
        {"delta", base.delta},
        {"lbfgs_memory", base.lbfgs_memory},
        {"fval_tol", base.fval_tol},
        {"grad_floor", base.grad_floor},
        {"iter_cap", base.iter_cap ? nlohmann::json(*base.iter_cap)
                                   : nlohmann::json("1500 for A-C, 500 for D-G")},
        {"wolfe",
         {{"c1", base.wolfe.c1},
          {"c2", base.wolfe.c2},
          {"initial_step", base.wolfe.initial_step},
          {"max_fg_evals", base.wolfe.max_fg_evals},
          {"strong_curvature", base.wolfe.strong_curvature},
          {"min_step", kMinStep},
          {"max_step", kMaxStep},
          {"expansion", kExpansionFactor}}},
    };
}

nlohmann::json to_json(TrialResult const& t, bool with_history) {
    nlohmann::json j = {
        {"seed", t.seed},
        {"status", to_string(t.status)},
        {"converged", t.converged},
        {"fg_evals", t.fg_evals},
        {"iterations", t.history.iterations.empty() ? 0 : t.history.iterations.back().iter_index},
        {"f_star", t.f_star},
        {"final_f", number_or_null(t.final_f)},
        {"final_gnorm", number_or_null(t.final_gnorm)},
    };
    if (!t.message.empty()) {
        j["message"] = t.message;
    }
    if (with_history) {
        nlohmann::json rows = nlohmann::json::array();
        for (auto const& r : t.history.iterations) {
            rows.push_back({{"iter", r.iter_index},
                            {"fg_evals", r.fg_evals_cumulative},
                            {"f", r.f_value},
                            {"gnorm2", r.grad_norm_2},
                            {"gnorminf", r.grad_norm_inf},
                            {"step_kind", to_string(r.step_kind)}});
        }
        j["history"] = std::move(rows);
    }
    return j;
}

nlohmann::json to_json(RunSummary const& s, bool with_details) {
    nlohmann::json j = {
        {"problem", to_string(s.problem.tag)},
        {"n", s.problem.n},
        {"method", to_string(s.method)},
        {"window_w", s.window_w},
        {"trials", s.trials},
        {"converged", s.converged},
        {"dnf_count", s.dnf_count},
        {"mean_fg_evals_to_tol", number_or_null(s.mean_fg_evals_to_tol)},
        {"mean_fg_evals_incl_dnf", number_or_null(s.mean_fg_evals_incl_dnf)},
    };
    if (with_details) {
        nlohmann::json d = nlohmann::json::array();
        for (auto const& t : s.details) {
            d.push_back(to_json(t, false));
        }
        j["trials_detail"] = std::move(d);
    }
    return j;
}

std::string summaries_to_table(std::vector<RunSummary> const& summaries) {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::map<std::pair<std::string, std::string>, std::string> cells;
    for (auto const& s : summaries) {
        std::string row = problem_label(s.problem);
        std::string col = to_string(s.method);
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) {
            rows.push_back(row);
        }
        if (std::find(cols.begin(), cols.end(), col) == cols.end()) {
            cols.push_back(col);
        }
        std::ostringstream cell;
        if (s.converged > 0) {
            cell << static_cast<long long>(std::llround(s.mean_fg_evals_to_tol));
        } else {
            cell << "-";
        }
        if (s.dnf_count > 0) {
            cell << '(' << s.dnf_count << ')';
        }
        cells[{row, col}] = cell.str();
    }

    std::size_t row_width = std::string("problem").size();
    for (auto const& r : rows) {
        row_width = std::max(row_width, r.size());
    }
    std::vector<std::size_t> widths;
    for (auto const& c : cols) {
        std::size_t w = c.size();
        for (auto const& r : rows) {
            w = std::max(w, cells[{r, c}].size());
        }
        widths.push_back(w);
    }

    std::ostringstream os;
    auto pad = [&](std::string const& s, std::size_t w) {
        os << s << std::string(w - s.size() + 2, ' ');
    };
    pad("problem", row_width);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        pad(cols[i], widths[i]);
    }
    os << '\n';
    for (auto const& r : rows) {
        pad(r, row_width);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            pad(cells[{r, cols[i]}], widths[i]);
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------- Verification ----------------------------------

GradientCheck gradient_check(ProblemKind const& kind, std::size_t points, double h,
                             std::uint64_t seed) {
    ProblemKind k = kind;
    if (k.tag == ProblemTag::C && !k.seed) {
        k.seed = seed;
    }
    auto const obj = make_problem(k);
    Rng rng(seed, RngStream::Test);
    GradientCheck out;
    EvalCounter counter;
    for (std::size_t i = 0; i < points; ++i) {
        Point const x = rng.uniform_vector(static_cast<Eigen::Index>(k.n));
        Gradient const g = evaluate(*obj, x, counter).g;
        Gradient const fd = finite_difference_gradient(*obj, x, h);
        double const scale = std::max(g.lpNorm<Eigen::Infinity>(), 1.0);
        out.max_rel_error =
            std::max(out.max_rel_error, (g - fd).lpNorm<Eigen::Infinity>() / scale);
        ++out.points;
    }
    return out;
}

EquivalenceReport gmres_equivalence(std::size_t n, std::uint64_t seed, double residual_floor) {
    QuadraticSpec const spec = diagonal_quadratic(n);
    QuadraticObjective const obj(spec);
    Point const x0 = initial_guess(n, seed);

    NGmresConfig cfg;
    cfg.window_w = n;
    cfg.max_iters = n;
    cfg.grad_tol = 0.0;
    SteepestDescentFixedStep const pre;
    EvalCounter counter;
    SolveResult const res = ngmres_solve(obj, pre, cfg, x0, counter);

    std::vector<double> const oracle = linear_gmres_oracle(spec, x0, n);

    EquivalenceReport report;
    for (auto const& rec : res.history.iterations) {
        if (rec.iter_index == 0) {
            continue;
        }
        if (rec.step_kind == StepKind::Restart) {
            ++report.restarts;
        }
        if (rec.iter_index >= oracle.size()) {
            break;
        }
        EquivalenceRow row{rec.iter_index, rec.accel_residual, oracle[rec.iter_index],
                           rec.step_kind};
        report.rows.push_back(row);
        if (row.oracle_residual < residual_floor) {
            break;
        }
        double const rel =
            std::abs(row.ngmres_residual - row.oracle_residual) / row.oracle_residual;
        report.max_rel_diff = std::max(report.max_rel_diff, rel);
    }
    return report;
}

} // namespace ngopt
