#include "ngopt/baselines.hpp"

#include <cassert>
#include <stdexcept>

namespace ngopt {

namespace {

void validate(BaselineConfig const& config) {
    config.wolfe.validate();
    if (!(config.grad_tol >= 0.0)) {
        throw std::invalid_argument("gradient tolerance must be nonnegative");
    }
}

// Policy interface (static):
//   Eigen::VectorXd direction(Gradient const& g);
//   Eigen::VectorXd fallback(Gradient const& g);   // steepest-descent direction
//   void accepted(Eigen::VectorXd const& p, Point const& s, Gradient const& g_old,
//                 Gradient const& g_new);
template <class Policy>
SolveResult run_line_search_method(Objective const& obj, BaselineConfig const& config,
                                   Point const& x0, EvalCounter& counter, Policy& policy) {
    validate(config);
    if (static_cast<std::size_t>(x0.size()) != obj.dimension()) {
        throw std::invalid_argument("initial point has the wrong dimension");
    }
    require_finite(x0, "non-finite initial point");

    SolveResult result;
    Point x = x0;
    Evaluation cur = evaluate(obj, x, counter);
    result.history.iterations.push_back(make_record(0, counter, cur.f, cur.g, StepKind::Initial));

    auto finish = [&](SolveStatus status, std::string message = {}) {
        result.x = x;
        result.f = cur.f;
        result.g = cur.g;
        result.status = status;
        result.message = std::move(message);
        return result;
    };

    if (auto stop = check_stop(cur.f, cur.g, config.grad_tol, config.fval_tol)) {
        return finish(*stop);
    }

    try {
        for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
            Eigen::VectorXd p = policy.direction(cur.g);
            bool steepest = false;
            if (!(cur.g.dot(p) < 0.0)) {
                p = policy.fallback(cur.g);
                steepest = true;
            }

            LineSearchResult ls = line_search(obj, x, p, cur.f, cur.g, config.wolfe, counter);
            result.history.line_searches.push_back(
                to_record(ls, cur.f, config.wolfe, iter, SearchOrigin::Baseline));
            bool ok = ls.status == LineSearchStatus::WolfeSatisfied || ls.f_new <= cur.f;
            if (!ok && !steepest) {
                p = policy.fallback(cur.g);
                ls = line_search(obj, x, p, cur.f, cur.g, config.wolfe, counter);
                result.history.line_searches.push_back(
                    to_record(ls, cur.f, config.wolfe, iter, SearchOrigin::Baseline));
                ok = ls.status == LineSearchStatus::WolfeSatisfied || ls.f_new <= cur.f;
            }
            if (!ok) {
                return finish(SolveStatus::Failed, "no progress: line search found no decrease");
            }

            Point const s = ls.x_new - x;
            policy.accepted(p, s, cur.g, ls.g_new);
            x = std::move(ls.x_new);
            cur.f = ls.f_new;
            cur.g = std::move(ls.g_new);
            result.history.iterations.push_back(
                make_record(iter, counter, cur.f, cur.g, StepKind::Descent));

            if (auto stop = check_stop(cur.f, cur.g, config.grad_tol, config.fval_tol)) {
                return finish(*stop);
            }
            if (s.squaredNorm() == 0.0) {
                return finish(SolveStatus::Failed, "no progress: iterate unchanged");
            }
        }
    } catch (NumericalFailure const& e) {
        return finish(SolveStatus::Failed, e.what());
    }
    return finish(SolveStatus::MaxIters);
}

struct SteepestDescentPolicy {
    Eigen::VectorXd direction(Gradient const& g) { return -g / g.norm(); }
    Eigen::VectorXd fallback(Gradient const& g) { return direction(g); }
    void accepted(Eigen::VectorXd const&, Point const&, Gradient const&, Gradient const&) {}
};

struct PolakRibierePolicy {
    Eigen::VectorXd prev_p;
    Gradient prev_g;
    bool have_prev = false;

    Eigen::VectorXd direction(Gradient const& g) {
        if (!have_prev) {
            return -g;
        }
        double const beta = g.dot(g - prev_g) / prev_g.squaredNorm();
        return -g + beta * prev_p;
    }
    Eigen::VectorXd fallback(Gradient const& g) { return -g; }
    void accepted(Eigen::VectorXd const& p, Point const&, Gradient const& g_old,
                  Gradient const&) {
        prev_p = p;
        prev_g = g_old;
        have_prev = true;
    }
};

struct LbfgsPolicy {
    std::size_t memory;
    std::deque<CurvaturePair> pairs;

    Eigen::VectorXd direction(Gradient const& g) { return lbfgs_direction(pairs, g); }
    Eigen::VectorXd fallback(Gradient const& g) {
        pairs.clear();
        return -g;
    }
    void accepted(Eigen::VectorXd const&, Point const& s, Gradient const& g_old,
                  Gradient const& g_new) {
        Eigen::VectorXd y = g_new - g_old;
        double const sy = s.dot(y);
        if (!(sy > kLbfgsCurvatureSkip * s.norm() * y.norm())) {
            return;
        }
        assert(sy > 0.0);
        pairs.push_back({s, std::move(y)});
        while (pairs.size() > memory) {
            pairs.pop_front();
        }
    }
};

} // namespace

SolveResult steepest_descent_solve(Objective const& obj, BaselineConfig const& config,
                                   Point const& x0, EvalCounter& counter) {
    SteepestDescentPolicy policy;
    return run_line_search_method(obj, config, x0, counter, policy);
}

SolveResult ncg_solve(Objective const& obj, NcgConfig const& config, Point const& x0,
                      EvalCounter& counter) {
    PolakRibierePolicy policy;
    return run_line_search_method(obj, config, x0, counter, policy);
}

Eigen::VectorXd lbfgs_direction(std::deque<CurvaturePair> const& pairs, Gradient const& g) {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(pairs.size());
    std::vector<double> rho(pairs.size());
    for (std::size_t i = pairs.size(); i-- > 0;) {
        rho[i] = 1.0 / pairs[i].y.dot(pairs[i].s);
        alpha[i] = rho[i] * pairs[i].s.dot(q);
        q -= alpha[i] * pairs[i].y;
    }
    double gamma = 1.0;
    if (!pairs.empty()) {
        auto const& newest = pairs.back();
        gamma = newest.s.dot(newest.y) / newest.y.squaredNorm();
    }
    Eigen::VectorXd r = gamma * q;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double const beta = rho[i] * pairs[i].y.dot(r);
        r += (alpha[i] - beta) * pairs[i].s;
    }
    return -r;
}

SolveResult lbfgs_solve(Objective const& obj, LbfgsConfig const& config, Point const& x0,
                        EvalCounter& counter) {
    if (config.memory_m == 0) {
        throw std::invalid_argument("L-BFGS memory must be at least 1");
    }
    LbfgsPolicy policy{config.memory_m, {}};
    return run_line_search_method(obj, config, x0, counter, policy);
}

} // namespace ngopt
