#pragma once

#include "ngopt/core.hpp"

namespace ngopt {

/// Parameters of the Wolfe line search.
///
/// Acceptance uses the sufficient decrease condition
/// `f(x + βp) <= f(x) + c1·β·g(x)ᵀp` together with the (non-strong)
/// curvature condition `g(x + βp)ᵀp >= c2·g(x)ᵀp`.
struct WolfeParams {
    double c1 = 1e-4;
    double c2 = 1e-2;
    double initial_step = 1.0;
    std::size_t max_fg_evals = 20;
    /// Also require |g(x + βp)ᵀp| <= c2·|g(x)ᵀp| (strong Wolfe). A step
    /// accepted this way satisfies the plain conditions as well.
    bool strong_curvature = false;

    /// Throws std::invalid_argument unless 0 < c1 < c2 < 1, step > 0, budget > 0.
    void validate() const;
};

/// Step-length bracket. Trial steps never leave [min_step, max_step].
inline constexpr double kMinStep = 1e-20;
inline constexpr double kMaxStep = 1e20;
inline constexpr double kExpansionFactor = 2.0;

struct LineSearchResult {
    double step = 0.0;
    Point x_new;
    double f_new = 0.0;
    Gradient g_new;
    double slope0 = 0.0;    ///< g0ᵀp
    double slope_new = 0.0; ///< g_newᵀp
    std::size_t fg_evals = 0;
    LineSearchStatus status = LineSearchStatus::BudgetExhaustedBestFound;
};

/// Bracket-and-zoom Wolfe line search along `p` starting at `x`.
///
/// `f0`, `g0` are the already-known value and gradient at `x` and are not
/// re-evaluated. At most `params.max_fg_evals` evaluations are spent. When
/// the budget runs out (or the bracket collapses to rounding level) the trial
/// point with the lowest f is returned with status BudgetExhaustedBestFound;
/// its f may exceed `f0`.
///
/// Throws NotDescentDirection if g0ᵀp >= 0.
LineSearchResult line_search(Objective const& obj, Point const& x, Eigen::VectorXd const& p,
                             double f0, Gradient const& g0, WolfeParams const& params,
                             EvalCounter& counter);

/// True when both Wolfe inequalities hold for the given scalars.
bool wolfe_conditions_hold(double f0, double slope0, double step, double f_new,
                           double slope_new, double c1, double c2) noexcept;

LineSearchRecord to_record(LineSearchResult const& r, double f0, WolfeParams const& params,
                           std::size_t iter, SearchOrigin origin);

char const* to_string(LineSearchStatus status) noexcept;

} // namespace ngopt
