#include "ngopt/ngmres.hpp"

#include "ngopt/leastsq.hpp"

#include <stdexcept>

namespace ngopt {

Preconditioned precondition_sdls(Point const& x, double f_x, Gradient const& g_x,
                                 Objective const& obj, WolfeParams const& wolfe,
                                 EvalCounter& counter) {
    double const gnorm = g_x.norm();
    if (gnorm == 0.0) {
        throw AlreadyStationary();
    }
    Eigen::VectorXd const p = -g_x / gnorm;
    LineSearchResult ls = line_search(obj, x, p, f_x, g_x, wolfe, counter);

    Preconditioned out;
    out.search = to_record(ls, f_x, wolfe, 0, SearchOrigin::Preconditioner);
    if (ls.status == LineSearchStatus::WolfeSatisfied || ls.f_new <= f_x) {
        out.x_bar = std::move(ls.x_new);
        out.f_bar = ls.f_new;
        out.g_bar = std::move(ls.g_new);
    } else {
        out.x_bar = x;
        out.f_bar = f_x;
        out.g_bar = g_x;
    }
    return out;
}

Preconditioned precondition_sd(Point const& x, double /*f_x*/, Gradient const& g_x,
                               Objective const& obj, SdParams const& params,
                               EvalCounter& counter) {
    double const gnorm = g_x.norm();
    if (gnorm == 0.0) {
        throw AlreadyStationary();
    }
    double const beta = std::min(params.delta, gnorm);
    Preconditioned out;
    out.x_bar = x - (beta / gnorm) * g_x;
    Evaluation ev = evaluate(obj, out.x_bar, counter);
    out.f_bar = ev.f;
    out.g_bar = std::move(ev.g);
    return out;
}

SteepestDescentFixedStep::SteepestDescentFixedStep(SdParams params) : params_(params) {
    if (!(params_.delta > 0.0)) {
        throw std::invalid_argument("sd preconditioner step delta must be positive");
    }
}

// -------------------------------- Window ------------------------------------

Window::Window(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw std::invalid_argument("window capacity must be at least 1");
    }
}

void Window::push(Point x, Gradient g) {
    entries_.push_back({std::move(x), std::move(g)});
    while (entries_.size() > capacity_) {
        entries_.pop_front();
    }
}

void Window::reset(Point x, Gradient g) {
    entries_.clear();
    entries_.push_back({std::move(x), std::move(g)});
}

// ----------------------------- Acceleration ---------------------------------

Acceleration gmres_accelerate(Window const& window, Point const& x_bar, Gradient const& g_bar) {
    if (window.empty()) {
        throw std::invalid_argument("acceleration needs a nonempty window");
    }
    auto const k = static_cast<Eigen::Index>(window.size());
    RecombinationSystem sys;
    sys.base = g_bar;
    sys.columns.resize(g_bar.size(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        sys.columns.col(j) = g_bar - window[static_cast<std::size_t>(j)].g;
    }
    RecombinationResult rr = solve_recombination(sys);

    Acceleration out;
    out.u_hat = x_bar;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (rr.alphas[j] != 0.0) {
            out.u_hat += rr.alphas[j] * (x_bar - window[static_cast<std::size_t>(j)].x);
        }
    }
    out.alphas = std::move(rr.alphas);
    out.residual_norm = rr.residual_norm;
    return out;
}

// -------------------------------- Driver ------------------------------------

void NGmresConfig::validate() const {
    if (window_w == 0) {
        throw std::invalid_argument("window size must be at least 1");
    }
    if (!(grad_tol >= 0.0)) {
        throw std::invalid_argument("gradient tolerance must be nonnegative");
    }
    wolfe.validate();
}

NGmresState ngmres_init(Objective const& obj, Point const& x0, NGmresConfig const& config,
                        EvalCounter& counter) {
    config.validate();
    if (static_cast<std::size_t>(x0.size()) != obj.dimension()) {
        throw std::invalid_argument("initial point has the wrong dimension");
    }
    require_finite(x0, "non-finite initial point");
    Evaluation ev = evaluate(obj, x0, counter);
    NGmresState state{x0, ev.f, ev.g, Window(config.window_w), 0};
    state.window.push(state.x, state.g);
    return state;
}

StepOutcome ngmres_step(NGmresState& state, Objective const& obj, Preconditioner const& precond,
                        NGmresConfig const& config, EvalCounter& counter) {
    StepOutcome out;
    std::size_t const iter = state.iter + 1;

    // Step I
    Preconditioned pre = precond.apply(obj, state.x, state.f, state.g, counter);
    out.f_preliminary = pre.f_bar;
    if (pre.search) {
        pre.search->iter_index = iter;
        out.searches.push_back(*pre.search);
    }

    // Step II
    Acceleration acc = gmres_accelerate(state.window, pre.x_bar, pre.g_bar);
    out.accel_residual = acc.residual_norm;

    // Step III
    Eigen::VectorXd const p = acc.u_hat - pre.x_bar;
    double const slope = pre.g_bar.dot(p);
    if (slope < 0.0) {
        LineSearchResult ls =
            line_search(obj, pre.x_bar, p, pre.f_bar, pre.g_bar, config.wolfe, counter);
        out.searches.push_back(to_record(ls, pre.f_bar, config.wolfe, iter,
                                         SearchOrigin::Acceleration));
        if (ls.status == LineSearchStatus::WolfeSatisfied || ls.f_new <= pre.f_bar) {
            state.x = std::move(ls.x_new);
            state.f = ls.f_new;
            state.g = std::move(ls.g_new);
            out.kind = StepKind::Accelerated;
        } else {
            state.x = std::move(pre.x_bar);
            state.f = pre.f_bar;
            state.g = std::move(pre.g_bar);
            out.kind = StepKind::Precondition;
        }
        state.window.push(state.x, state.g);
    } else {
        state.x = std::move(pre.x_bar);
        state.f = pre.f_bar;
        state.g = std::move(pre.g_bar);
        state.window.reset(state.x, state.g);
        out.kind = StepKind::Restart;
    }
    state.iter = iter;
    return out;
}

SolveResult ngmres_solve(Objective const& obj, Preconditioner const& precond,
                         NGmresConfig const& config, Point const& x0, EvalCounter& counter) {
    SolveResult result;
    NGmresState state = ngmres_init(obj, x0, config, counter);
    result.history.iterations.push_back(
        make_record(0, counter, state.f, state.g, StepKind::Initial));
    result.history.iterations.back().window_size = state.window.size();

    auto finish = [&](SolveStatus status, std::string message = {}) {
        result.x = state.x;
        result.f = state.f;
        result.g = state.g;
        result.status = status;
        result.message = std::move(message);
        return result;
    };

    if (auto stop = check_stop(state.f, state.g, config.grad_tol, config.fval_tol)) {
        return finish(*stop);
    }

    while (state.iter < config.max_iters) {
        Point const previous = state.x;
        StepOutcome step;
        try {
            step = ngmres_step(state, obj, precond, config, counter);
        } catch (AlreadyStationary const&) {
            return finish(SolveStatus::GradTol);
        } catch (NumericalFailure const& e) {
            return finish(SolveStatus::Failed, e.what());
        }

        IterationRecord rec = make_record(state.iter, counter, state.f, state.g, step.kind);
        rec.f_preliminary = step.f_preliminary;
        rec.accel_residual = step.accel_residual;
        rec.window_size = state.window.size();
        result.history.iterations.push_back(rec);
        for (auto const& s : step.searches) {
            result.history.line_searches.push_back(s);
        }

        if (auto stop = check_stop(state.f, state.g, config.grad_tol, config.fval_tol)) {
            return finish(*stop);
        }
        if (state.x == previous) {
            return finish(SolveStatus::Failed, "no progress: iterate unchanged");
        }
    }
    return finish(SolveStatus::MaxIters);
}

} // namespace ngopt
