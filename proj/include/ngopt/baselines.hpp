#pragma once

#include "ngopt/core.hpp"
#include "ngopt/linesearch.hpp"

#include <deque>
#include <optional>

namespace ngopt {

/// Stopping and line-search settings shared by the reference optimizers.
struct BaselineConfig {
    WolfeParams wolfe;
    std::size_t max_iters = 1500;
    double grad_tol = 1e-8;
    std::optional<FvalTolerance> fval_tol;
};

using NcgConfig = BaselineConfig;

struct LbfgsConfig : BaselineConfig {
    std::size_t memory_m = 5;
};

/// Steepest descent with a Wolfe line search along −g/‖g‖ (initial step 1).
SolveResult steepest_descent_solve(Objective const& obj, BaselineConfig const& config,
                                   Point const& x0, EvalCounter& counter);

/// Polak-Ribière nonlinear CG. The direction falls back to −g whenever the
/// PR update is not a descent direction.
SolveResult ncg_solve(Objective const& obj, NcgConfig const& config, Point const& x0,
                      EvalCounter& counter);

struct CurvaturePair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
};

/// Two-loop recursion: returns −H·g for the L-BFGS inverse Hessian built
/// from `pairs` (oldest first), seeded with γ = sᵀy / yᵀy of the newest pair
/// (γ = 1 with no pairs).
Eigen::VectorXd lbfgs_direction(std::deque<CurvaturePair> const& pairs, Gradient const& g);

/// Pairs with sᵀy below this fraction of ‖s‖‖y‖ are not stored.
inline constexpr double kLbfgsCurvatureSkip = 1e-10;

SolveResult lbfgs_solve(Objective const& obj, LbfgsConfig const& config, Point const& x0,
                        EvalCounter& counter);

} // namespace ngopt
