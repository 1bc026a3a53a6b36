#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <tuple>
#include <type_traits>
#include <utility>

#include "pme/errors.hpp"

namespace pme {

inline constexpr int kMaxNewtonIterations = 100;
inline constexpr int kMaxBracketDoublings = 64;

/// Largest real root of t^3 + p t + q = 0.
///
/// Cardano's formula when the discriminant is positive, the trigonometric
/// form when there are three real roots, then Newton polishing. For q < 0 the
/// largest root is the only positive root that can exceed 1, which is the root
/// the perspective Berhu prox needs.
inline double solve_depressed_cubic(double p, double q) {
    const double half_q = 0.5 * q;
    const double third_p = p / 3.0;
    const double disc = half_q * half_q + third_p * third_p * third_p;

    double t;
    if (p == 0.0) {
        t = std::cbrt(-q);
    } else if (disc > 0.0) {
        // u^3 chosen with the sign of -q so that u + v does not cancel.
        const double sq = std::sqrt(disc);
        const double u3 = (half_q > 0.0) ? (-half_q - sq) : (-half_q + sq);
        const double u = std::cbrt(u3);
        t = (u != 0.0) ? u - third_p / u : 0.0;
    } else {
        // three real roots (p < 0); k = 0 branch is the largest
        const double m = 2.0 * std::sqrt(-third_p);
        double c = 3.0 * q / (p * m);
        c = std::clamp(c, -1.0, 1.0);
        t = m * std::cos(std::acos(c) / 3.0);
    }

    for (int k = 0; k < 3; ++k) {
        const double f = (t * t + p) * t + q;
        const double df = 3.0 * t * t + p;
        if (f == 0.0 || df <= 0.0) break;
        const double next = t - f / df;
        if (!std::isfinite(next) || std::abs((next * next + p) * next + q) >= std::abs(f)) break;
        t = next;
    }
    return t;
}

namespace detail {

template <class F>
concept ValueAndSlope = requires(F f, double t) {
    { f(t).first } -> std::convertible_to<double>;
    { f(t).second } -> std::convertible_to<double>;
};

template <class F>
std::pair<double, double> eval_root_fn(F& f, double t) {
    if constexpr (ValueAndSlope<F>) {
        auto r = f(t);
        return {static_cast<double>(r.first), static_cast<double>(r.second)};
    } else {
        return {static_cast<double>(f(t)), std::numeric_limits<double>::quiet_NaN()};
    }
}

}  // namespace detail

/// Root of an increasing scalar function on [lo, hi].
///
/// `f` returns either the value or a (value, derivative) pair. With a
/// derivative, Newton steps are taken and replaced by bisection whenever they
/// leave the current bracket; without one, Illinois false position is used.
/// If f(hi) < 0 the bracket is grown by doubling its width.
/// Stops when |f(t)| <= tol or the bracket shrinks to a few ulps.
template <class F>
double solve_monotone_root(F&& f, double lo, double hi, double tol) {
    auto [flo, dlo] = detail::eval_root_fn(f, lo);
    (void)dlo;
    if (flo == 0.0) return lo;
    if (flo > 0.0) throw BracketError("solve_monotone_root: f(lo) > 0");
    auto [fhi, dhi] = detail::eval_root_fn(f, hi);
    int grow = 0;
    while (fhi < 0.0) {
        if (++grow > kMaxBracketDoublings) throw BracketError("solve_monotone_root: no sign change found");
        const double width = hi - lo;
        lo = hi;
        flo = fhi;
        hi = lo + 2.0 * (width > 0.0 ? width : 1.0);
        std::tie(fhi, dhi) = detail::eval_root_fn(f, hi);
    }
    if (fhi == 0.0) return hi;
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;

    constexpr bool has_slope = detail::ValueAndSlope<std::remove_cvref_t<F>>;
    double t, ft, dt;
    if constexpr (has_slope) {
        t = (dhi > 0.0 && std::isfinite(dhi)) ? hi - fhi / dhi : 0.5 * (lo + hi);
        if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    } else {
        t = lo - flo * (hi - lo) / (fhi - flo);
    }
    std::tie(ft, dt) = detail::eval_root_fn(f, t);

    double best = t, fbest = std::abs(ft);
    int side = 0;
    for (int it = 0; it < 4 * kMaxNewtonIterations; ++it) {
        if (std::abs(ft) < fbest) {
            best = t;
            fbest = std::abs(ft);
        }
        if (fbest <= tol) break;
        if (ft < 0.0) {
            lo = t;
            flo = ft;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;

        double next;
        if constexpr (has_slope) {
            next = (dt > 0.0 && std::isfinite(dt) && it < kMaxNewtonIterations) ? t - ft / dt
                                                                              : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            // Illinois: the stale endpoint's value was halved above
            next = lo - flo * (hi - lo) / (fhi - flo);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        }
        t = next;
        std::tie(ft, dt) = detail::eval_root_fn(f, t);
    }
    if (std::abs(ft) < fbest) best = t;
    return best;
}

}  // namespace pme
