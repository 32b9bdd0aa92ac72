#include "ngopt/problems.hpp"

#include "ngopt/rng.hpp"

#include <Eigen/QR>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ngopt {

char const* to_string(ProblemTag tag) noexcept {
    switch (tag) {
    case ProblemTag::A: return "A";
    case ProblemTag::B: return "B";
    case ProblemTag::C: return "C";
    case ProblemTag::D: return "D";
    case ProblemTag::E: return "E";
    case ProblemTag::F: return "F";
    case ProblemTag::G: return "G";
    }
    return "?";
}

ProblemTag parse_problem_tag(std::string const& s) {
    if (s.size() == 1) {
        char const c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        if (c >= 'A' && c <= 'G') {
            return static_cast<ProblemTag>(c - 'A');
        }
    }
    throw InvalidProblem("unknown problem '" + s + "' (expected A..G)");
}

namespace {

Point ones(std::size_t n) { return Point::Ones(static_cast<Eigen::Index>(n)); }

// A: ½(u−u*)ᵀD(u−u*) + 1
class DiagonalQuadratic final : public Objective {
  public:
    explicit DiagonalQuadratic(std::size_t n)
        : d_(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 1.0, double(n))),
          u_star_(ones(n)) {}
    std::size_t dimension() const override { return static_cast<std::size_t>(d_.size()); }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        Eigen::VectorXd const x = u - u_star_;
        g = d_.cwiseProduct(x);
        return 0.5 * x.dot(g) + 1.0;
    }
    std::optional<KnownOptimum> known_optimum() const override {
        return KnownOptimum{u_star_, 1.0};
    }
    std::string name() const override { return "A"; }

  private:
    Eigen::VectorXd d_;
    Point u_star_;
};

// B and C: ½ y(u−u*)ᵀ T y(u−u*) + 1 with y_1 = x_1, y_i = x_i − 10x_1².
// T is diagonal for B (stored as a vector) and dense for C.
class ParaboloidQuadratic final : public Objective {
  public:
    ParaboloidQuadratic(std::size_t n, Eigen::MatrixXd dense, std::string name)
        : n_(n), dense_(std::move(dense)), u_star_(ones(n)), name_(std::move(name)) {}
    explicit ParaboloidQuadratic(std::size_t n)
        : n_(n),
          diag_(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 1.0, double(n))),
          u_star_(ones(n)), name_("B") {}

    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        Eigen::VectorXd const x = u - u_star_;
        Eigen::VectorXd y = x;
        double const x1 = x[0];
        y.tail(y.size() - 1).array() -= 10.0 * x1 * x1;
        Eigen::VectorXd const ty = diag_.size() > 0 ? Eigen::VectorXd(diag_.cwiseProduct(y))
                                                    : Eigen::VectorXd(dense_ * y);
        g = ty;
        g[0] -= 20.0 * x1 * ty.tail(ty.size() - 1).sum();
        return 0.5 * y.dot(ty) + 1.0;
    }
    std::optional<KnownOptimum> known_optimum() const override {
        return KnownOptimum{u_star_, 1.0};
    }
    std::string name() const override { return name_; }

  private:
    std::size_t n_;
    Eigen::VectorXd diag_;
    Eigen::MatrixXd dense_;
    Point u_star_;
    std::string name_;
};

// D: t_j = 10(u_{j+1} − u_j²) for odd j, 1 − u_{j−1} for even j (1-based).
class ExtendedRosenbrock final : public Objective {
  public:
    explicit ExtendedRosenbrock(std::size_t n) : n_(n) {}
    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        g.resize(u.size());
        double f = 0.0;
        for (Eigen::Index i = 0; i + 1 < u.size(); i += 2) {
            double const t_odd = 10.0 * (u[i + 1] - u[i] * u[i]);
            double const t_even = 1.0 - u[i];
            f += t_odd * t_odd + t_even * t_even;
            g[i] = -20.0 * u[i] * t_odd - t_even;
            g[i + 1] = 10.0 * t_odd;
        }
        return 0.5 * f;
    }
    std::optional<KnownOptimum> known_optimum() const override {
        return KnownOptimum{ones(n_), 0.0};
    }
    std::string name() const override { return "D"; }

  private:
    std::size_t n_;
};

// E: t_j = u_j + Σu − (n+1) for j < n, t_n = Πu − 1.
class BrownAlmostLinear final : public Objective {
  public:
    explicit BrownAlmostLinear(std::size_t n) : n_(n) {}
    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        auto const n = u.size();
        double const sum = u.sum();
        double const shift = sum - double(n + 1);

        // Products excluding one factor, without dividing by u_k.
        Eigen::VectorXd prefix(n + 1);
        Eigen::VectorXd suffix(n + 1);
        prefix[0] = 1.0;
        suffix[n] = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            prefix[i + 1] = prefix[i] * u[i];
            suffix[n - 1 - i] = suffix[n - i] * u[n - 1 - i];
        }
        double const t_last = prefix[n] - 1.0;

        double f = t_last * t_last;
        double lin_sum = 0.0;
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            double const t = u[j] + shift;
            f += t * t;
            lin_sum += t;
        }
        g.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            double gk = lin_sum + t_last * prefix[k] * suffix[k + 1];
            if (k + 1 < n) {
                gk += u[k] + shift;
            }
            g[k] = gk;
        }
        return 0.5 * f;
    }
    std::optional<KnownOptimum> known_optimum() const override {
        return KnownOptimum{ones(n_), 0.0};
    }
    std::string name() const override { return "E"; }

  private:
    std::size_t n_;
};

// F: t_j = n − Σcos u_i − j(1 − cos u_j) − sin u_j.
class Trigonometric final : public Objective {
  public:
    explicit Trigonometric(std::size_t n) : n_(n) {}
    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        auto const n = u.size();
        Eigen::ArrayXd const c = u.array().cos();
        Eigen::ArrayXd const s = u.array().sin();
        double const base = double(n) - c.sum();
        Eigen::ArrayXd const j = Eigen::ArrayXd::LinSpaced(n, 1.0, double(n));
        Eigen::ArrayXd const t = base - j * (1.0 - c) - s;
        double const t_sum = t.sum();
        g = (s * t_sum - t * (j * s + c)).matrix();
        return 0.5 * t.square().sum();
    }
    std::optional<KnownOptimum> known_optimum() const override {
        return KnownOptimum{Point::Zero(static_cast<Eigen::Index>(n_)), 0.0};
    }
    std::string name() const override { return "F"; }

  private:
    std::size_t n_;
};

// G: t_j = √1e-5 (u_j − 1), t_{n+1} = Σu² − 1/4.
class PenaltyOne final : public Objective {
  public:
    static constexpr double kWeight = 1e-5;
    explicit PenaltyOne(std::size_t n) : n_(n) {}
    std::size_t dimension() const override { return n_; }
    double value_and_gradient(Point const& u, Gradient& g) const override {
        double const t_last = u.squaredNorm() - 0.25;
        Eigen::ArrayXd const d = u.array() - 1.0;
        g = (kWeight * d + 2.0 * t_last * u.array()).matrix();
        return 0.5 * (kWeight * d.square().sum() + t_last * t_last);
    }
    std::string name() const override { return "G"; }

  private:
    std::size_t n_;
};

} // namespace

Eigen::MatrixXd random_orthogonal(std::size_t n, std::uint64_t seed) {
    auto const m = static_cast<Eigen::Index>(n);
    Rng rng(seed, RngStream::ProblemMatrix);
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            a(i, j) = rng.uniform01();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd const& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) *= -1.0;
        }
    }
    return q;
}

std::shared_ptr<Objective const> make_problem(ProblemKind const& kind) {
    std::size_t const n = kind.n;
    if (n == 0) {
        throw InvalidProblem("problem dimension must be positive");
    }
    switch (kind.tag) {
    case ProblemTag::A: return std::make_shared<DiagonalQuadratic>(n);
    case ProblemTag::B:
        if (n < 2) {
            throw InvalidProblem("problem B needs n >= 2");
        }
        return std::make_shared<ParaboloidQuadratic>(n);
    case ProblemTag::C: {
        if (n < 2) {
            throw InvalidProblem("problem C needs n >= 2");
        }
        if (!kind.seed) {
            throw InvalidProblem("problem C needs a seed for its random orthogonal matrix");
        }
        Eigen::MatrixXd const q = random_orthogonal(n, *kind.seed);
        Eigen::VectorXd const d =
            Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 1.0, double(n));
        Eigen::MatrixXd t = q * d.asDiagonal() * q.transpose();
        t = 0.5 * (t + t.transpose()).eval();
        return std::make_shared<ParaboloidQuadratic>(n, std::move(t), "C");
    }
    case ProblemTag::D:
        if (n % 2 != 0) {
            throw InvalidProblem("problem D (extended Rosenbrock) needs n even");
        }
        return std::make_shared<ExtendedRosenbrock>(n);
    case ProblemTag::E: return std::make_shared<BrownAlmostLinear>(n);
    case ProblemTag::F: return std::make_shared<Trigonometric>(n);
    case ProblemTag::G: return std::make_shared<PenaltyOne>(n);
    }
    throw InvalidProblem("unknown problem tag");
}

// ------------------------------ Quadratic -----------------------------------

void QuadraticSpec::validate() const {
    if (A.rows() != A.cols() || A.rows() != b.size() || b.size() == 0) {
        throw InvalidProblem("quadratic: A must be square and match b");
    }
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidProblem("quadratic: A must be symmetric");
    }
    if ((A.diagonal().array() <= 0.0).any()) {
        throw InvalidProblem("quadratic: A must have a positive diagonal");
    }
}

QuadraticObjective::QuadraticObjective(QuadraticSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

double QuadraticObjective::value_and_gradient(Point const& x, Gradient& grad) const {
    Eigen::VectorXd const ax = spec_.A * x;
    grad = ax - spec_.b;
    return 0.5 * x.dot(ax) - spec_.b.dot(x);
}

QuadraticSpec diagonal_quadratic(std::size_t n) {
    auto const m = static_cast<Eigen::Index>(n);
    Eigen::VectorXd const d = Eigen::VectorXd::LinSpaced(m, 1.0, double(n));
    QuadraticSpec spec{d.asDiagonal().toDenseMatrix(), d};
    return spec;
}

// ------------------------------- Oracles ------------------------------------

Gradient finite_difference_gradient(Objective const& obj, Point const& x, double h) {
    if (!(h >= 1e-8 && h <= 1e-3)) {
        throw std::invalid_argument("finite-difference step must lie in [1e-8, 1e-3]");
    }
    EvalCounter scratch;
    Gradient out(x.size());
    Point xp = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        xp[k] = x[k] + h;
        double const fp = evaluate(obj, xp, scratch).f;
        xp[k] = x[k] - h;
        double const fm = evaluate(obj, xp, scratch).f;
        xp[k] = x[k];
        out[k] = (fp - fm) / (2.0 * h);
    }
    return out;
}

std::vector<double> linear_gmres_oracle(QuadraticSpec const& spec, Point const& x0,
                                        std::size_t k) {
    spec.validate();
    auto const n = spec.b.size();
    if (k > static_cast<std::size_t>(n)) {
        throw std::invalid_argument("Krylov dimension cannot exceed n");
    }
    Eigen::VectorXd const r0 = spec.b - spec.A * x0;
    double const r0_norm = r0.norm();
    std::vector<double> out{r0_norm};
    if (r0_norm == 0.0) {
        return out;
    }

    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(k));
    Eigen::VectorXd v = r0 / r0_norm;
    for (std::size_t i = 1; i <= k; ++i) {
        auto const cols = static_cast<Eigen::Index>(i);
        basis.col(cols - 1) = v;

        Eigen::MatrixXd const av = spec.A * basis.leftCols(cols);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(av);
        Eigen::VectorXd const y = qr.solve(r0);
        out.push_back((r0 - av * y).norm());

        // Next basis vector: A·v orthogonalized twice against the basis.
        Eigen::VectorXd w = spec.A * v;
        double const w_norm0 = w.norm();
        for (int pass = 0; pass < 2; ++pass) {
            w -= basis.leftCols(cols) * (basis.leftCols(cols).transpose() * w);
        }
        double const w_norm = w.norm();
        if (w_norm <= 1e-13 * w_norm0) {
            break;
        }
        v = w / w_norm;
    }
    return out;
}

} // namespace ngopt
