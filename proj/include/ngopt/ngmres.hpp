#pragma once

#include "ngopt/core.hpp"
#include "ngopt/linesearch.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <vector>

/// \file ngmres.hpp
///
/// Preconditioned nonlinear GMRES for unconstrained minimization.
///
/// Each outer iteration
///   1. maps the current iterate u_i to a preliminary iterate ū = M(u_i),
///   2. recombines ū with the stored iterates u_j so that the linearized
///      gradient of û = ū + Σ α_j (ū − u_j) has minimal two-norm,
///   3. line-searches from ū along û − ū if that is a descent direction,
///      otherwise takes ū and restarts the window.

namespace ngopt {

struct Preconditioned {
    Point x_bar;
    double f_bar = 0.0;
    Gradient g_bar;
    /// Set when the preconditioner ran a line search.
    std::optional<LineSearchRecord> search;
};

/// One-step update process M(.) used in Step I.
///
/// Implementations return the objective value and gradient at `x_bar` so the
/// driver never re-evaluates it.
class Preconditioner {
  public:
    virtual ~Preconditioner() = default;
    virtual Preconditioned apply(Objective const& obj, Point const& x, double f_x,
                                 Gradient const& g_x, EvalCounter& counter) const = 0;
    virtual std::string name() const = 0;
};

struct SdParams {
    double delta = 1e-4;
};

/// Steepest descent with a Wolfe line search along −g/‖g‖.
///
/// If the search ends without finding a point at least as good as `x`, `x`
/// itself is returned (no extra evaluation).
/// Throws AlreadyStationary when g_x = 0.
Preconditioned precondition_sdls(Point const& x, double f_x, Gradient const& g_x,
                                 Objective const& obj, WolfeParams const& wolfe,
                                 EvalCounter& counter);

/// Steepest descent with the fixed step β = min(δ, ‖g‖) along −g/‖g‖.
/// Exactly one evaluation; f may increase.
/// Throws AlreadyStationary when g_x = 0.
Preconditioned precondition_sd(Point const& x, double f_x, Gradient const& g_x,
                               Objective const& obj, SdParams const& params,
                               EvalCounter& counter);

class SteepestDescentLineSearch final : public Preconditioner {
  public:
    explicit SteepestDescentLineSearch(WolfeParams wolfe = {}) : wolfe_(wolfe) {}
    Preconditioned apply(Objective const& obj, Point const& x, double f_x, Gradient const& g_x,
                         EvalCounter& counter) const override {
        return precondition_sdls(x, f_x, g_x, obj, wolfe_, counter);
    }
    std::string name() const override { return "sdls"; }

  private:
    WolfeParams wolfe_;
};

class SteepestDescentFixedStep final : public Preconditioner {
  public:
    explicit SteepestDescentFixedStep(SdParams params = {});
    Preconditioned apply(Objective const& obj, Point const& x, double f_x, Gradient const& g_x,
                         EvalCounter& counter) const override {
        return precondition_sd(x, f_x, g_x, obj, params_, counter);
    }
    std::string name() const override { return "sd"; }

  private:
    SdParams params_;
};

/// Bounded FIFO of (iterate, gradient) pairs.
class Window {
  public:
    struct Entry {
        Point x;
        Gradient g;
    };

    explicit Window(std::size_t capacity);

    /// Appends, evicting the oldest entry once capacity is exceeded.
    void push(Point x, Gradient g);
    /// Drops everything and keeps only (x, g).
    void reset(Point x, Gradient g);

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    bool empty() const noexcept { return entries_.empty(); }
    Entry const& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

  private:
    std::size_t capacity_;
    std::deque<Entry> entries_;
};

struct Acceleration {
    Point u_hat;
    Eigen::VectorXd alphas;
    double residual_norm = 0.0; ///< linearized ‖g(û)‖₂
};

/// Recombines `x_bar` with the window iterates. No objective evaluations.
Acceleration gmres_accelerate(Window const& window, Point const& x_bar, Gradient const& g_bar);

struct NGmresConfig {
    std::size_t window_w = 20;
    std::size_t max_iters = 1500;
    double grad_tol = 1e-8;
    std::optional<FvalTolerance> fval_tol;
    WolfeParams wolfe;

    void validate() const;
};

struct NGmresState {
    Point x;
    double f = 0.0;
    Gradient g;
    Window window;
    std::size_t iter = 0;
};

struct StepOutcome {
    StepKind kind = StepKind::Accelerated;
    double f_preliminary = 0.0;
    double accel_residual = 0.0;
    std::vector<LineSearchRecord> searches;
};

/// Starts a run at `x0` (one evaluation, window = {x0}).
NGmresState ngmres_init(Objective const& obj, Point const& x0, NGmresConfig const& config,
                        EvalCounter& counter);

/// Performs Steps I–III once, advancing `state` in place.
StepOutcome ngmres_step(NGmresState& state, Objective const& obj, Preconditioner const& precond,
                        NGmresConfig const& config, EvalCounter& counter);

/// Iterates until ‖g‖₂ <= grad_tol, the optional f tolerance is met or
/// max_iters outer iterations have been taken. NumericalFailure ends the run
/// with status Failed and the partial history.
SolveResult ngmres_solve(Objective const& obj, Preconditioner const& precond,
                         NGmresConfig const& config, Point const& x0, EvalCounter& counter);

} // namespace ngopt
