#include "ngopt/core.hpp"

#include <cmath>
#include <sstream>

namespace ngopt {

namespace {

std::string describe_failure(std::string const& what, double offending) {
    std::ostringstream os;
    os << what << " (offending value " << offending << ")";
    return os.str();
}

} // namespace

NumericalFailure::NumericalFailure(std::string const& what, Point x, double offending)
    : Error(describe_failure(what, offending)), x_(std::move(x)), value_(offending) {}

NotDescentDirection::NotDescentDirection(double slope)
    : Error("search direction is not a descent direction (g'p = " + std::to_string(slope) + ")"),
      slope_(slope) {}

Evaluation evaluate(Objective const& obj, Point const& x, EvalCounter& counter) {
    Evaluation out;
    out.g.resize(static_cast<Eigen::Index>(obj.dimension()));
    ++counter.fg_evals;
    out.f = obj.value_and_gradient(x, out.g);
    if (!std::isfinite(out.f)) {
        throw NumericalFailure("non-finite objective value", x, out.f);
    }
    for (Eigen::Index k = 0; k < out.g.size(); ++k) {
        if (!std::isfinite(out.g[k])) {
            throw NumericalFailure("non-finite gradient entry", x, out.g[k]);
        }
    }
    return out;
}

void require_finite(Eigen::Ref<Eigen::VectorXd const> v, char const* what) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) {
            throw NumericalFailure(what, Point(v), v[k]);
        }
    }
}

char const* to_string(StepKind kind) noexcept {
    switch (kind) {
    case StepKind::Initial: return "initial";
    case StepKind::Precondition: return "precondition";
    case StepKind::Accelerated: return "accelerated";
    case StepKind::Restart: return "restart";
    case StepKind::Descent: return "descent";
    }
    return "unknown";
}

char const* to_string(SolveStatus status) noexcept {
    switch (status) {
    case SolveStatus::GradTol: return "grad_tol";
    case SolveStatus::FvalTol: return "fval_tol";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Failed: return "failed";
    }
    return "unknown";
}

std::optional<SolveStatus> check_stop(double f, Gradient const& g, double grad_tol,
                                      std::optional<FvalTolerance> const& fval_tol) {
    if (fval_tol && std::abs(f - fval_tol->f_star) < fval_tol->tol) {
        return SolveStatus::FvalTol;
    }
    if (g.norm() <= grad_tol) {
        return SolveStatus::GradTol;
    }
    return std::nullopt;
}

IterationRecord make_record(std::size_t iter, EvalCounter const& counter, double f,
                            Gradient const& g, StepKind kind) {
    IterationRecord rec;
    rec.iter_index = iter;
    rec.fg_evals_cumulative = counter.fg_evals;
    rec.f_value = f;
    rec.grad_norm_2 = g.norm();
    rec.grad_norm_inf = g.size() > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;
    rec.step_kind = kind;
    return rec;
}

} // namespace ngopt
