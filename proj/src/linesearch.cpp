#include "ngopt/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ngopt {

void WolfeParams::validate() const {
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
        throw std::invalid_argument("Wolfe parameters must satisfy 0 < c1 < c2 < 1");
    }
    if (!(initial_step > 0.0)) {
        throw std::invalid_argument("initial line-search step must be positive");
    }
    if (max_fg_evals == 0) {
        throw std::invalid_argument("line-search evaluation budget must be positive");
    }
}

bool wolfe_conditions_hold(double f0, double slope0, double step, double f_new,
                           double slope_new, double c1, double c2) noexcept {
    return f_new <= f0 + c1 * step * slope0 && slope_new >= c2 * slope0;
}

char const* to_string(LineSearchStatus status) noexcept {
    switch (status) {
    case LineSearchStatus::WolfeSatisfied: return "wolfe";
    case LineSearchStatus::BudgetExhaustedBestFound: return "best_found";
    }
    return "unknown";
}

LineSearchRecord to_record(LineSearchResult const& r, double f0, WolfeParams const& params,
                           std::size_t iter, SearchOrigin origin) {
    LineSearchRecord rec;
    rec.iter_index = iter;
    rec.origin = origin;
    rec.f0 = f0;
    rec.slope0 = r.slope0;
    rec.step = r.step;
    rec.f_new = r.f_new;
    rec.slope_new = r.slope_new;
    rec.c1 = params.c1;
    rec.c2 = params.c2;
    rec.fg_evals = r.fg_evals;
    rec.status = r.status;
    return rec;
}

namespace {

// Zoom trials keep this fraction of the bracket away from either end.
constexpr double kZoomMargin = 1e-3;
constexpr double kZoomShrink = 0.66;
// Step reduction after a trial with a non-finite value.
constexpr double kNonFiniteContraction = 0.1;
// Extrapolated trials grow the step at least this much.
constexpr double kExtrapolationMin = 1.1;

struct Trial {
    double step;
    double f;
    double slope;
};

/// Minimizer of the cubic matching (f, f') at both ends; falls back to the
/// quadratic through (a.f, a.slope, b.f), then to the midpoint.
double interpolate(Trial const& a, Trial const& b) {
    double const h = b.step - a.step;
    double const d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.step - b.step);
    double const disc = d1 * d1 - a.slope * b.slope;
    if (disc >= 0.0) {
        double const d2 = std::copysign(std::sqrt(disc), h);
        double const denom = b.slope - a.slope + 2.0 * d2;
        if (denom != 0.0) {
            double const t = b.step - h * (b.slope + d2 - d1) / denom;
            if (std::isfinite(t)) {
                return t;
            }
        }
    }
    double const curv = b.f - a.f - a.slope * h;
    if (curv > 0.0) {
        double const t = a.step - a.slope * h * h / (2.0 * curv);
        if (std::isfinite(t)) {
            return t;
        }
    }
    return a.step + 0.5 * h;
}

} // namespace

LineSearchResult line_search(Objective const& obj, Point const& x, Eigen::VectorXd const& p,
                             double f0, Gradient const& g0, WolfeParams const& params,
                             EvalCounter& counter) {
    params.validate();
    double const slope0 = g0.dot(p);
    if (!(slope0 < 0.0)) {
        throw NotDescentDirection(slope0);
    }

    double const sufficient_rate = params.c1 * slope0;
    double const curvature_bound = params.c2 * slope0;

    LineSearchResult best;
    best.slope0 = slope0;
    best.f_new = std::numeric_limits<double>::infinity();

    // lo: the trial with the lowest f among those giving sufficient decrease
    // (initially the origin); its slope is still below the curvature bound.
    Trial lo{0.0, f0, slope0};
    Trial prev_lo = lo;
    std::optional<Trial> hi;
    double width = kMaxStep;
    double width_prev = 2.0 * kMaxStep;

    double step = std::clamp(params.initial_step, kMinStep, kMaxStep);
    std::size_t evals = 0;

    while (evals < params.max_fg_evals) {
        Point xt = x + step * p;
        Evaluation ev;
        try {
            ev = evaluate(obj, xt, counter);
        } catch (NumericalFailure const&) {
            // Overflow at this step length: treat as far too long.
            ++evals;
            hi = Trial{step, std::numeric_limits<double>::infinity(), 0.0};
            step = std::max(lo.step + kNonFiniteContraction * (step - lo.step), kMinStep);
            continue;
        }
        ++evals;
        double const slope = ev.g.dot(p);

        bool const sufficient = ev.f <= f0 + step * sufficient_rate;
        bool const curvature = params.strong_curvature ? std::abs(slope) <= -curvature_bound
                                                       : slope >= curvature_bound;
        if (sufficient && curvature) {
            LineSearchResult out;
            out.step = step;
            out.x_new = std::move(xt);
            out.f_new = ev.f;
            out.g_new = std::move(ev.g);
            out.slope0 = slope0;
            out.slope_new = slope;
            out.fg_evals = evals;
            out.status = LineSearchStatus::WolfeSatisfied;
            return out;
        }

        if (ev.f < best.f_new) {
            best.step = step;
            best.x_new = std::move(xt);
            best.f_new = ev.f;
            best.g_new = std::move(ev.g);
            best.slope_new = slope;
        }

        Trial const t{step, ev.f, slope};
        if (!sufficient || t.f >= lo.f || slope > 0.0) {
            hi = t;
        } else {
            prev_lo = lo;
            lo = t;
        }

        if (hi) {
            double const w = hi->step - lo.step;
            if (w <= 4.0 * std::numeric_limits<double>::epsilon() * hi->step) {
                break;
            }
            double next = interpolate(lo, *hi);
            double const margin = kZoomMargin * w;
            next = std::isfinite(next) ? std::clamp(next, lo.step + margin, hi->step - margin)
                                       : lo.step + 0.5 * w;
            // Force bisection when two zoom steps in a row shrank the
            // bracket too little.
            if (w >= kZoomShrink * width_prev) {
                next = lo.step + 0.5 * w;
            }
            width_prev = width;
            width = w;
            step = std::max(next, kMinStep);
        } else {
            if (step >= kMaxStep) {
                break;
            }
            double const lower = kExtrapolationMin * step;
            double const upper = std::min(kExpansionFactor * step, kMaxStep);
            double next = interpolate(prev_lo, lo);
            if (!(next >= lower)) {
                next = upper;
            }
            step = std::min(next, upper);
        }
    }

    if (!std::isfinite(best.f_new)) {
        throw NumericalFailure("line search produced only non-finite trial values", x, best.f_new);
    }
    best.fg_evals = evals;
    best.status = LineSearchStatus::BudgetExhaustedBestFound;
    return best;
}

} // namespace ngopt
