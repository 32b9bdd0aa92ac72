#pragma once

#include "ngopt/core.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ngopt {

enum class ProblemTag { A, B, C, D, E, F, G };

char const* to_string(ProblemTag tag) noexcept;
/// Parses "A".."G" (case-insensitive). Throws InvalidProblem.
ProblemTag parse_problem_tag(std::string const& s);

struct ProblemKind {
    ProblemTag tag = ProblemTag::A;
    std::size_t n = 2;
    /// Instance seed; only Problem C consumes it (random orthogonal mixing).
    std::optional<std::uint64_t> seed;
};

/// Builds one of the seven benchmark objectives:
///   A  diagonal quadratic ½(u−1)ᵀD(u−1) + 1, D = diag(1..n)
///   B  A composed with the paraboloid map y_1 = x_1, y_i = x_i − 10x_1²
///   C  B with D replaced by Q·D·Qᵀ, Q a seeded random orthogonal matrix
///   D  extended Rosenbrock (n even)
///   E  Brown almost-linear
///   F  trigonometric
///   G  penalty function I
/// D–G are written as ½Σt_j². Throws InvalidProblem for bad n or a missing
/// seed for C.
std::shared_ptr<Objective const> make_problem(ProblemKind const& kind);

/// Random orthogonal matrix: Q factor of a QR factorization of an n×n matrix
/// with entries uniform on [0,1], columns signed so diag(R) >= 0.
Eigen::MatrixXd random_orthogonal(std::size_t n, std::uint64_t seed);

/// f(u) = ½uᵀAu − bᵀu, with gradient Au − b = −r.
struct QuadraticSpec {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    /// Throws InvalidProblem unless A is square, symmetric within 1e-12 with a
    /// positive diagonal, and b matches.
    void validate() const;
};

class QuadraticObjective final : public Objective {
  public:
    explicit QuadraticObjective(QuadraticSpec spec);
    std::size_t dimension() const override { return static_cast<std::size_t>(spec_.b.size()); }
    double value_and_gradient(Point const& x, Gradient& grad) const override;
    std::string name() const override { return "quadratic"; }
    QuadraticSpec const& spec() const noexcept { return spec_; }

  private:
    QuadraticSpec spec_;
};

/// ½uᵀDu − bᵀu with D = diag(1..n) and b = D·1 (minimizer u* = 1).
QuadraticSpec diagonal_quadratic(std::size_t n);

/// Wraps a callable `double(Point const&, Gradient&)`; handy for small
/// analytic test objectives.
class FunctionObjective final : public Objective {
  public:
    using Fn = std::function<double(Point const&, Gradient&)>;
    FunctionObjective(std::size_t n, Fn fn, std::optional<KnownOptimum> opt = std::nullopt,
                      std::string name = "function")
        : n_(n), fn_(std::move(fn)), opt_(std::move(opt)), name_(std::move(name)) {}
    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& x, Gradient& grad) const override {
        return fn_(x, grad);
    }
    std::optional<KnownOptimum> known_optimum() const override { return opt_; }
    std::string name() const override { return name_; }

  private:
    std::size_t n_;
    Fn fn_;
    std::optional<KnownOptimum> opt_;
    std::string name_;
};

/// Central differences (f(x+h·e_k) − f(x−h·e_k)) / 2h.
/// Throws std::invalid_argument unless 1e-8 <= h <= 1e-3; NumericalFailure on
/// non-finite values.
Gradient finite_difference_gradient(Objective const& obj, Point const& x, double h);

/// Minimal residual norms ‖b − Ax‖₂ over x ∈ x0 + K_i(A, r0) for i = 0..k
/// (entry 0 is ‖r0‖), from an explicit orthonormal Krylov basis and a
/// Householder least-squares solve. The list ends early at breakdown.
std::vector<double> linear_gmres_oracle(QuadraticSpec const& spec, Point const& x0,
                                        std::size_t k);

} // namespace ngopt
