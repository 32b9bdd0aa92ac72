#include "ngopt/leastsq.hpp"

#include "ngopt/core.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace ngopt {

namespace {
constexpr int kRefinementPasses = 2;
}

RecombinationResult solve_recombination(RecombinationSystem const& sys) {
    Eigen::Index const n = sys.base.size();
    Eigen::Index const k = sys.columns.cols();
    if (k == 0) {
        throw std::invalid_argument("recombination system needs at least one column");
    }
    if (sys.columns.rows() != n) {
        throw std::invalid_argument("recombination columns must have the length of the base");
    }
    require_finite(sys.base, "non-finite recombination base residual");
    for (Eigen::Index j = 0; j < k; ++j) {
        require_finite(sys.columns.col(j), "non-finite recombination column");
    }

    double const base_norm = sys.base.norm();
    RecombinationResult zero{Eigen::VectorXd::Zero(k), base_norm};
    if (base_norm == 0.0) {
        return zero;
    }

    Eigen::VectorXd scale(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double const cn = sys.columns.col(j).norm();
        scale[j] = cn > 0.0 ? 1.0 / cn : 0.0;
    }
    Eigen::MatrixXd const scaled = sys.columns * scale.asDiagonal();

    Eigen::MatrixXd const exact = scaled.transpose() * scaled;
    Eigen::MatrixXd gram = exact;
    gram.diagonal().array() += kGramRegularization;
    // Zero columns decouple: give them a unit pivot so their α stays 0.
    for (Eigen::Index j = 0; j < k; ++j) {
        if (scale[j] == 0.0) {
            gram.row(j).setZero();
            gram.col(j).setZero();
            gram(j, j) = 1.0;
        }
    }
    Eigen::VectorXd const rhs = -(scaled.transpose() * sys.base);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        return zero;
    }
    Eigen::VectorXd beta = ldlt.solve(rhs);
    // Iterated Tikhonov: each pass removes most of the bias the shift puts on
    // well-determined directions while null directions stay at zero.
    for (int pass = 0; pass < kRefinementPasses; ++pass) {
        beta += ldlt.solve(rhs - exact * beta);
    }
    if (ldlt.info() != Eigen::Success || !beta.allFinite()) {
        return zero;
    }

    RecombinationResult out;
    out.alphas = scale.asDiagonal() * beta;
    out.residual_norm = (sys.base + sys.columns * out.alphas).norm();
    if (!std::isfinite(out.residual_norm) || out.residual_norm > base_norm) {
        return zero;
    }
    return out;
}

} // namespace ngopt
