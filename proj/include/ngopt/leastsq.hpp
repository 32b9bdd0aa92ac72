#pragma once

#include <Eigen/Core>

namespace ngopt {

/// min over α of ‖base + columns·α‖₂, the linearized gradient norm of the
/// recombined iterate.
struct RecombinationSystem {
    Eigen::VectorXd base;    ///< g(ū), length n
    Eigen::MatrixXd columns; ///< n × k, column j = g(ū) − g(u_j)
};

struct RecombinationResult {
    Eigen::VectorXd alphas;
    double residual_norm = 0.0;
};

/// Relative Tikhonov shift applied to the unit-diagonal scaled Gram matrix.
inline constexpr double kGramRegularization = 1e-12;

/// Solves the recombination problem through the k × k normal equations.
///
/// Columns are scaled to unit norm before forming the Gram matrix (zero
/// columns get α = 0), a shift of kGramRegularization is added to the
/// diagonal, and the system is solved by LDLᵀ followed by two refinement
/// passes against the unshifted matrix. The result never has a larger
/// residual than α = 0; if it would, or the factorization fails, α = 0 is
/// returned.
///
/// Throws NumericalFailure on non-finite input, std::invalid_argument on a
/// size mismatch or k = 0.
RecombinationResult solve_recombination(RecombinationSystem const& sys);

} // namespace ngopt
