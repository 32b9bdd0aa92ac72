#include "ngopt/baselines.hpp"
#include "ngopt/harness.hpp"
#include "ngopt/problems.hpp"

#include <doctest.h>

using namespace ngopt;

namespace {

void check_monotone(SolveResult const& r) {
    auto const& it = r.history.iterations;
    for (std::size_t i = 1; i < it.size(); ++i) {
        CHECK(it[i].f_value <= it[i - 1].f_value);
    }
}

void check_wolfe_audit(SolveResult const& r) {
    for (auto const& s : r.history.line_searches) {
        CHECK(s.slope0 < 0.0);
        if (s.status == LineSearchStatus::WolfeSatisfied) {
            CHECK(s.f_new <= s.f0 + s.c1 * s.step * s.slope0);
            CHECK(s.slope_new >= s.c2 * s.slope0);
        }
    }
}

} // namespace

TEST_SUITE("baselines") {

TEST_CASE("two-loop recursion by hand") {
    std::deque<CurvaturePair> pairs;
    CurvaturePair p;
    p.s = Eigen::Vector2d(1.0, 0.0);
    p.y = Eigen::Vector2d(1.0, 0.0);
    pairs.push_back(p);
    Eigen::VectorXd const d = lbfgs_direction(pairs, Eigen::Vector2d(1.0, 1.0));
    CHECK(d[0] == doctest::Approx(-1.0));
    CHECK(d[1] == doctest::Approx(-1.0));

    Eigen::VectorXd const sd = lbfgs_direction({}, Eigen::Vector2d(3.0, -2.0));
    CHECK(sd[0] == -3.0);
    CHECK(sd[1] == 2.0);
}

TEST_CASE("two-loop recursion satisfies the secant equation for the newest pair") {
    // With one pair, H·y = s exactly.
    std::deque<CurvaturePair> pairs;
    CurvaturePair p;
    p.s = Eigen::Vector3d(1.0, 2.0, -1.0);
    p.y = Eigen::Vector3d(2.0, 1.0, 0.5);
    pairs.push_back(p);
    Eigen::VectorXd const hy = -lbfgs_direction(pairs, p.y);
    CHECK((hy - p.s).norm() < 1e-12);
}

TEST_CASE("starting at the optimum converges immediately") {
    auto const a = make_problem({ProblemTag::A, 5, std::nullopt});
    LbfgsConfig cfg;
    for (int m = 0; m < 3; ++m) {
        EvalCounter counter;
        SolveResult const r = m == 0   ? steepest_descent_solve(*a, cfg, Point::Ones(5), counter)
                              : m == 1 ? ncg_solve(*a, cfg, Point::Ones(5), counter)
                                       : lbfgs_solve(*a, cfg, Point::Ones(5), counter);
        CHECK(r.status == SolveStatus::GradTol);
        CHECK(counter.fg_evals == 1);
        CHECK(r.history.iterations.size() == 1);
    }
}

TEST_CASE("steepest descent on the 1-D half square") {
    FunctionObjective half(1, [](Point const& x, Gradient& g) {
        g = x;
        return 0.5 * x.squaredNorm();
    });
    EvalCounter counter;
    SolveResult const r =
        steepest_descent_solve(half, BaselineConfig{}, Point::Constant(1, 2.0), counter);
    CHECK(r.status == SolveStatus::GradTol);
    CHECK(r.x[0] == doctest::Approx(0.0).epsilon(1e-8));
    REQUIRE(!r.history.line_searches.empty());
    CHECK(r.history.line_searches.front().status == LineSearchStatus::WolfeSatisfied);
}

TEST_CASE("N-CG on Problem A n=5 converges in at most 3n iterations") {
    auto const a = make_problem({ProblemTag::A, 5, std::nullopt});
    NcgConfig cfg;
    cfg.max_iters = 15;
    EvalCounter counter;
    SolveResult const r = ncg_solve(*a, cfg, initial_guess(5, 0), counter);
    CHECK(r.status == SolveStatus::GradTol);
    CHECK(r.g.norm() < 1e-8);
    CHECK(r.history.iterations.size() <= 16);
}

TEST_CASE("runs are monotone and pass the Wolfe audit") {
    for (auto tag : {ProblemTag::A, ProblemTag::B, ProblemTag::D, ProblemTag::E}) {
        auto const obj = make_problem({tag, 20, std::nullopt});
        LbfgsConfig cfg;
        cfg.max_iters = 300;
        for (int m = 0; m < 3; ++m) {
            CAPTURE(std::string(to_string(tag)));
            CAPTURE(m);
            EvalCounter counter;
            Point const x0 = initial_guess(20, 5);
            SolveResult const r = m == 0   ? steepest_descent_solve(*obj, cfg, x0, counter)
                                  : m == 1 ? ncg_solve(*obj, cfg, x0, counter)
                                           : lbfgs_solve(*obj, cfg, x0, counter);
            CHECK(r.status != SolveStatus::Failed);
            check_monotone(r);
            check_wolfe_audit(r);
            CHECK(r.history.iterations.back().fg_evals_cumulative == counter.fg_evals);
        }
    }
}

TEST_CASE("L-BFGS and N-CG reach tight gradients on Rosenbrock") {
    auto const d = make_problem({ProblemTag::D, 10, std::nullopt});
    LbfgsConfig cfg;
    cfg.max_iters = 2000;
    EvalCounter c1;
    EvalCounter c2;
    SolveResult const lb = lbfgs_solve(*d, cfg, initial_guess(10, 2), c1);
    SolveResult const cg = ncg_solve(*d, cfg, initial_guess(10, 2), c2);
    CHECK(lb.status == SolveStatus::GradTol);
    CHECK(cg.status == SolveStatus::GradTol);
    CHECK((lb.x - Point::Ones(10)).norm() < 1e-6);
}

}
