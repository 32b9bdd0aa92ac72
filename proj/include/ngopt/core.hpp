#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/// \file core.hpp
///
/// Domain types shared by every optimizer in the library: points, gradients,
/// the objective contract, counted evaluation and convergence telemetry.

namespace ngopt {

using Point = Eigen::VectorXd;
using Gradient = Eigen::VectorXd;

// ------------------------------- Errors -------------------------------------

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A non-finite objective value or gradient entry was produced.
class NumericalFailure : public Error {
  public:
    NumericalFailure(std::string const& what, Point x, double offending);

    Point const& point() const noexcept { return x_; }
    double offending_value() const noexcept { return value_; }

  private:
    Point x_;
    double value_;
};

class NotDescentDirection : public Error {
  public:
    explicit NotDescentDirection(double slope);
    double slope() const noexcept { return slope_; }

  private:
    double slope_;
};

/// Raised by preconditioners handed a point with zero gradient.
class AlreadyStationary : public Error {
  public:
    AlreadyStationary() : Error("gradient is exactly zero") {}
};

class InvalidProblem : public Error {
  public:
    using Error::Error;
};

// ------------------------------ Objective -----------------------------------

struct KnownOptimum {
    Point x;
    double f;
};

/// Smooth objective returning f and its gradient in a single call.
///
/// Implementations must be re-entrant: `value_and_gradient` may not mutate
/// any state, so one instance can be shared across concurrent runs.
class Objective {
  public:
    virtual ~Objective() = default;

    virtual std::size_t dimension() const = 0;

    /// Writes ∇f(x) into `grad`, resizing it if needed, and returns f(x).
    virtual double value_and_gradient(Point const& x, Gradient& grad) const = 0;

    virtual std::optional<KnownOptimum> known_optimum() const { return std::nullopt; }

    virtual std::string name() const { return "objective"; }
};

/// Number of combined f/g evaluations spent by one run.
struct EvalCounter {
    std::size_t fg_evals = 0;
};

struct Evaluation {
    double f;
    Gradient g;
};

/// Evaluates `obj` at `x`, bumping `counter` by one.
///
/// Throws NumericalFailure if f or any gradient entry is not finite.
Evaluation evaluate(Objective const& obj, Point const& x, EvalCounter& counter);

/// Throws NumericalFailure if any entry of `v` is not finite.
void require_finite(Eigen::Ref<Eigen::VectorXd const> v, char const* what);

// ------------------------------ Telemetry -----------------------------------

enum class StepKind {
    Initial,      ///< iteration 0, the starting point
    Precondition, ///< u_{i+1} taken as the preliminary iterate
    Accelerated,  ///< line search along the accelerated direction
    Restart,      ///< accelerated direction rejected, window reset
    Descent,      ///< plain line-search step of a baseline method
};

char const* to_string(StepKind kind) noexcept;

struct IterationRecord {
    std::size_t iter_index = 0;
    std::size_t fg_evals_cumulative = 0;
    double f_value = 0.0;
    double grad_norm_2 = 0.0;
    double grad_norm_inf = 0.0;
    StepKind step_kind = StepKind::Initial;

    // N-GMRES only; NaN / 0 elsewhere.
    double f_preliminary = std::numeric_limits<double>::quiet_NaN();
    double accel_residual = std::numeric_limits<double>::quiet_NaN();
    std::size_t window_size = 0;
};

enum class LineSearchStatus { WolfeSatisfied, BudgetExhaustedBestFound };

enum class SearchOrigin { Preconditioner, Acceleration, Baseline };

/// Scalars of one line search, enough to re-check both Wolfe inequalities.
struct LineSearchRecord {
    std::size_t iter_index = 0;
    SearchOrigin origin = SearchOrigin::Baseline;
    double f0 = 0.0;
    double slope0 = 0.0; ///< g0ᵀp
    double step = 0.0;
    double f_new = 0.0;
    double slope_new = 0.0; ///< g_newᵀp
    double c1 = 0.0;
    double c2 = 0.0;
    std::size_t fg_evals = 0;
    LineSearchStatus status = LineSearchStatus::WolfeSatisfied;
};

struct ConvergenceHistory {
    std::vector<IterationRecord> iterations;
    std::vector<LineSearchRecord> line_searches;
};

enum class SolveStatus { GradTol, FvalTol, MaxIters, Failed };

char const* to_string(SolveStatus status) noexcept;

/// Benchmark stop |f - f*| < tol.
struct FvalTolerance {
    double f_star;
    double tol;
};

struct SolveResult {
    Point x;
    double f = 0.0;
    Gradient g;
    ConvergenceHistory history;
    SolveStatus status = SolveStatus::Failed;
    std::string message;
};

/// Shared stopping test used by every driver.
std::optional<SolveStatus> check_stop(double f, Gradient const& g, double grad_tol,
                                      std::optional<FvalTolerance> const& fval_tol);

IterationRecord make_record(std::size_t iter, EvalCounter const& counter, double f,
                            Gradient const& g, StepKind kind);

} // namespace ngopt
