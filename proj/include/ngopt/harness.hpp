#pragma once

#include "ngopt/core.hpp"
#include "ngopt/linesearch.hpp"
#include "ngopt/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ngopt {

enum class Method { NGmresSdls, NGmresSd, Ncg, Lbfgs, Sdls };

char const* to_string(Method m) noexcept;
/// "ngmres-sdls", "ngmres-sd", "ncg", "lbfgs", "sdls". Throws std::invalid_argument.
Method parse_method(std::string const& s);
std::vector<Method> all_methods();

/// Outer-iteration cap used when a trial does not set one: 1500 for A–C,
/// 500 for D–G.
std::size_t default_iter_cap(ProblemTag tag) noexcept;

struct TrialConfig {
    ProblemKind problem;
    Method method = Method::NGmresSd;
    std::size_t window_w = 20;
    double delta = 1e-4;
    std::size_t lbfgs_memory = 5;
    std::uint64_t seed = 0;
    double fval_tol = 1e-6;
    std::optional<std::size_t> iter_cap;
    /// Runs also stop once ‖g‖₂ falls to this floor (counted as DNF unless
    /// the f tolerance was met).
    double grad_floor = 1e-12;
    WolfeParams wolfe;
};

struct TrialResult {
    std::uint64_t seed = 0;
    Point x0;
    double f_star = 0.0;
    ConvergenceHistory history;
    SolveStatus status = SolveStatus::Failed;
    std::string message;
    bool converged = false;      ///< reached |f − f*| < fval_tol
    std::size_t fg_evals = 0;    ///< total spent
    double final_f = 0.0;
    double final_gnorm = 0.0;
};

/// Reference optimum f* used for |f − f*|: the known optimum for A–F; for G
/// the agreed value of L-BFGS and N-CG runs driven to ‖g‖ < 1e-13 (cached
/// per n). Throws Error if the two reference runs disagree by more than 1e-10.
double reference_f_star(ProblemKind const& kind);

/// Initial guess drawn uniformly from [0,1]ⁿ with the trial seed.
Point initial_guess(std::size_t n, std::uint64_t seed);

/// One run; deterministic given the config. Solver failures are reported in
/// the result (status Failed, counted as DNF), not thrown.
TrialResult run_trial(TrialConfig const& cfg);

struct RunSummary {
    ProblemKind problem;
    Method method = Method::NGmresSd;
    std::size_t window_w = 0;
    std::size_t trials = 0;
    std::size_t converged = 0;
    std::size_t dnf_count = 0;
    /// Mean over converged trials only (NaN if none converged).
    double mean_fg_evals_to_tol = 0.0;
    /// Mean over all trials, DNF trials counted at the evaluations they spent.
    double mean_fg_evals_incl_dnf = 0.0;
    std::vector<TrialResult> details;
};

RunSummary summarize(ProblemKind const& problem, Method method, std::size_t window_w,
                     std::vector<TrialResult> trials);

/// For every (problem, method) runs `trials` trials with seeds
/// seed0 … seed0+trials−1; `base` supplies the remaining settings. Trials run
/// on up to `jobs` threads; results are sorted by seed.
std::vector<RunSummary> run_table(std::vector<ProblemKind> const& problems,
                                  std::vector<Method> const& methods, std::size_t trials,
                                  TrialConfig const& base, std::uint64_t seed0 = 0,
                                  std::size_t jobs = 1);

/// One summary per window size for an N-GMRES method.
std::vector<RunSummary> run_window_sweep(ProblemKind const& problem, Method method,
                                         std::vector<std::size_t> const& w_values,
                                         std::size_t trials, TrialConfig const& base,
                                         std::uint64_t seed0 = 0, std::size_t jobs = 1);

// ------------------------------- Exports ------------------------------------

/// `iter,fg_evals,f,log10_abs_f_err,gnorm2,gnorminf,step_kind`, one row per
/// outer iteration.
std::string history_to_csv(ConvergenceHistory const& history, std::optional<double> f_star);

nlohmann::json manifest_json(TrialConfig const& base, std::size_t trials, std::uint64_t seed0);
nlohmann::json to_json(TrialResult const& t, bool with_history);
nlohmann::json to_json(RunSummary const& s, bool with_details);

/// Aligned text table, one row per problem, one column per method, cells
/// "mean(dnf)", with dnf omitted when zero.
std::string summaries_to_table(std::vector<RunSummary> const& summaries);

// ---------------------------- Verification ----------------------------------

struct GradientCheck {
    std::size_t points = 0;
    double max_rel_error = 0.0; ///< ‖g − g_fd‖∞ / max(‖g‖∞, 1)
};

/// Compares analytic gradients against central differences at random points
/// drawn uniformly from [0,1]ⁿ.
GradientCheck gradient_check(ProblemKind const& kind, std::size_t points, double h,
                             std::uint64_t seed);

struct EquivalenceRow {
    std::size_t iter = 0;
    double ngmres_residual = 0.0; ///< ‖b − Aû‖ from the recombination step
    double oracle_residual = 0.0; ///< linear GMRES minimum over x0 + K_iter
    StepKind kind = StepKind::Accelerated;
};

struct EquivalenceReport {
    std::vector<EquivalenceRow> rows;
    double max_rel_diff = 0.0; ///< over rows with oracle residual above the floor
    std::size_t restarts = 0;
};

/// Runs N-GMRES with the sd preconditioner and a full window on
/// ½uᵀDu − bᵀu, D = diag(1..n), b = D·1, from a seeded random start, and
/// compares per-iteration residual norms with linear GMRES.
EquivalenceReport gmres_equivalence(std::size_t n, std::uint64_t seed,
                                    double residual_floor = 1e-10);

} // namespace ngopt
