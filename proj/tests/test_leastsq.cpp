#include "ngopt/core.hpp"
#include "ngopt/leastsq.hpp"
#include "ngopt/rng.hpp"

#include <Eigen/QR>
#include <doctest.h>

#include <limits>

using namespace ngopt;

namespace {

RecombinationSystem make_system(std::initializer_list<double> base,
                                std::initializer_list<std::initializer_list<double>> cols) {
    RecombinationSystem s;
    s.base = Eigen::VectorXd(static_cast<Eigen::Index>(base.size()));
    Eigen::Index i = 0;
    for (double v : base) {
        s.base[i++] = v;
    }
    s.columns.resize(s.base.size(), static_cast<Eigen::Index>(cols.size()));
    Eigen::Index j = 0;
    for (auto const& c : cols) {
        i = 0;
        for (double v : c) {
            s.columns(i++, j) = v;
        }
        ++j;
    }
    return s;
}

RecombinationSystem random_system(Rng& rng) {
    int const n = 1 + static_cast<int>(rng.uniform01() * 8);
    int const k = 1 + static_cast<int>(rng.uniform01() * 4);
    RecombinationSystem s;
    s.base = rng.uniform_vector(n, -1.0, 1.0);
    s.columns.resize(n, k);
    for (int j = 0; j < k; ++j) {
        s.columns.col(j) = rng.uniform_vector(n, -1.0, 1.0);
    }
    return s;
}

double qr_residual(RecombinationSystem const& s) {
    Eigen::VectorXd const a = s.columns.colPivHouseholderQr().solve(-s.base);
    return (s.base + s.columns * a).norm();
}

} // namespace

TEST_SUITE("leastsq") {

TEST_CASE("exact cancellation in one column") {
    auto const r = solve_recombination(make_system({1, 0}, {{-1, 0}}));
    CHECK(r.alphas[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual_norm < 1e-10);
}

TEST_CASE("two columns, hand-solved normal equations") {
    auto const r = solve_recombination(make_system({1, 1}, {{-1, 0}, {0, -1}}));
    CHECK(r.alphas[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.alphas[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual_norm < 1e-10);
}

TEST_CASE("zero base gives zero coefficients") {
    auto const r = solve_recombination(make_system({0, 0}, {{3, 1}, {-2, 5}}));
    CHECK(r.alphas.isZero(0.0));
    CHECK(r.residual_norm == 0.0);
}

TEST_CASE("zero and duplicate columns") {
    auto const z = solve_recombination(make_system({1, 2}, {{0, 0}}));
    CHECK(z.alphas[0] == 0.0);
    CHECK(z.residual_norm == doctest::Approx(std::sqrt(5.0)));

    auto const d = solve_recombination(make_system({1, 1}, {{-1, -1}, {-1, -1}}));
    CHECK(d.residual_norm < 1e-6);
    CHECK(d.residual_norm <= std::sqrt(2.0));
}

TEST_CASE("malformed and non-finite systems") {
    RecombinationSystem empty;
    empty.base = Eigen::VectorXd::Ones(2);
    empty.columns.resize(2, 0);
    CHECK_THROWS_AS(solve_recombination(empty), std::invalid_argument);

    RecombinationSystem mismatch;
    mismatch.base = Eigen::VectorXd::Ones(2);
    mismatch.columns = Eigen::MatrixXd::Ones(3, 1);
    CHECK_THROWS_AS(solve_recombination(mismatch), std::invalid_argument);

    auto bad = make_system({1, 0}, {{-1, 0}});
    bad.columns(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_recombination(bad), NumericalFailure);
    bad = make_system({1, std::numeric_limits<double>::infinity()}, {{-1, 0}});
    CHECK_THROWS_AS(solve_recombination(bad), NumericalFailure);
}

TEST_CASE("property: matches a pivoted QR solve and never exceeds the base norm") {
    Rng rng(21, RngStream::Test);
    for (int t = 0; t < 500; ++t) {
        RecombinationSystem const s = random_system(rng);
        auto const r = solve_recombination(s);
        double const oracle = qr_residual(s);
        CHECK(r.residual_norm <= s.base.norm() + 1e-12);
        CHECK(r.residual_norm == doctest::Approx(oracle).epsilon(1e-8).scale(s.base.norm()));
        CHECK(r.residual_norm ==
              doctest::Approx((s.base + s.columns * r.alphas).norm()).epsilon(1e-12));
    }
}

TEST_CASE("property: scale equivariance") {
    Rng rng(22, RngStream::Test);
    for (double gamma : {1e-6, 1e6}) {
        for (int t = 0; t < 100; ++t) {
            RecombinationSystem const s = random_system(rng);
            RecombinationSystem scaled{gamma * s.base, gamma * s.columns};
            auto const r = solve_recombination(s);
            auto const rs = solve_recombination(scaled);
            // With more columns than rows the minimizing α is not unique, so
            // only the residual is comparable there.
            if (s.columns.rows() >= s.columns.cols()) {
                for (Eigen::Index j = 0; j < r.alphas.size(); ++j) {
                    CHECK(rs.alphas[j] == doctest::Approx(r.alphas[j]).epsilon(1e-8));
                }
            }
            CHECK(rs.residual_norm ==
                  doctest::Approx(gamma * r.residual_norm).epsilon(1e-8).scale(gamma * s.base.norm()));
        }
    }
}

}
