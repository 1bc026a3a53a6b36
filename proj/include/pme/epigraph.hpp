#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "pme/errors.hpp"

namespace pme {

namespace detail {

using ld = long double;

template <class F>
ld eval_ld(F& f, ld v) {
    return static_cast<ld>(f(v));
}

/// Minimizer of an extended-valued convex function on [lo, hi].
///
/// `known` is a point where h is finite. Golden-section search; when both
/// interior probes are infinite the bracket is moved towards `known`.
template <class H>
ld golden_minimize(H& h, ld lo, ld hi, ld known, ld h_known, ld* h_out = nullptr) {
    constexpr ld kInvPhi = 0.618033988749894848204586834365638118L;
    const ld inf = std::numeric_limits<ld>::infinity();
    ld best = known, fbest = h_known;
    auto track = [&](ld v, ld fv) {
        if (fv < fbest) {
            best = v;
            fbest = fv;
        }
    };
    ld c = hi - kInvPhi * (hi - lo);
    ld d = lo + kInvPhi * (hi - lo);
    ld fc = h(c), fd = h(d);
    track(c, fc);
    track(d, fd);
    for (int it = 0; it < 400; ++it) {
        const ld width = hi - lo;
        const ld scale = std::max({ld(1), std::abs(lo), std::abs(hi)});
        if (width <= 1e-15L * scale) break;
        bool keep_left;
        if (fc < fd) {
            keep_left = true;
        } else if (fc > fd) {
            keep_left = false;
        } else {
            if (fc == inf && known < c) {
                // both probes outside the domain, which is an interval holding `known`
                hi = c;
            } else if (fc == inf && known > d) {
                lo = d;
            } else {
                // equal finite values: a convex minimizer lies between the probes
                lo = c;
                hi = d;
            }
            c = hi - kInvPhi * (hi - lo);
            d = lo + kInvPhi * (hi - lo);
            fc = h(c);
            fd = h(d);
            track(c, fc);
            track(d, fd);
            continue;
        }
        if (keep_left) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = h(c);
            track(c, fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = h(d);
            track(d, fd);
        }
    }
    if (h_out) *h_out = fbest;
    return best;
}

/// First finite point of f among the target, zero and +-2^k.
template <class F>
std::pair<ld, ld> finite_probe(F& f, ld target) {
    ld v = target;
    ld fv = eval_ld(f, v);
    if (std::isfinite(fv)) return {v, fv};
    v = 0;
    fv = eval_ld(f, v);
    if (std::isfinite(fv)) return {v, fv};
    for (int k = -40; k <= 40; ++k) {
        for (ld s : {ld(1), ld(-1)}) {
            v = s * std::ldexp(ld(1), k);
            fv = eval_ld(f, v);
            if (std::isfinite(fv)) return {v, fv};
        }
    }
    throw EmptyRegionError("epigraph region {chi + f(nu) <= 0} appears empty");
}

}  // namespace detail

/// Euclidean projection of (chi, nu) onto {(a, b) : a + f(b) <= 0}.
///
/// `f` is a proper lsc convex function of one variable returning +inf off its
/// domain. For a fixed abscissa b the best a is min(chi, -f(b)); the remaining
/// one-dimensional convex problem in b is solved by golden section.
template <class F>
std::pair<double, double> project_epi_region_2d(F&& f, double chi, double nu) {
    using detail::ld;
    const ld a = chi, b = nu;
    const ld fb = detail::eval_ld(f, b);
    if (std::isfinite(fb) && a + fb <= 0) return {chi, nu};

    auto h = [&](ld v) -> ld {
        const ld fv = detail::eval_ld(f, v);
        if (!std::isfinite(fv)) return std::numeric_limits<ld>::infinity();
        const ld excess = std::max(a + fv, ld(0));
        return excess * excess + (v - b) * (v - b);
    };

    auto [v0, f0] = detail::finite_probe(f, b);
    const ld h0 = h(v0);
    const ld radius = std::sqrt(h0);
    const ld v = detail::golden_minimize(h, b - radius, b + radius, v0, h0);
    const ld fv = detail::eval_ld(f, v);
    return {static_cast<double>(std::min(a, -fv)), static_cast<double>(v)};
}

/// Euclidean projection of (mu, w) onto {(m, u) : m + g(|u|) <= 0} in R x R^d.
///
/// Works in the full space through the KKT system: the multiplier lam >= 0
/// gives m = mu - lam and u = prox_{lam g(|.|)}(w), and lam is found by
/// bisection on the active constraint. Used as an independent check of the
/// planar reduction.
template <class G>
std::pair<double, Eigen::VectorXd> project_conjugate_set(G&& g, double mu, const Eigen::VectorXd& w) {
    using detail::ld;
    const ld wn = w.norm();
    const ld gw = detail::eval_ld(g, wn);
    if (std::isfinite(gw) && mu + gw <= 0) return {mu, w};

    const ld g0 = detail::eval_ld(g, ld(0));
    if (!std::isfinite(g0)) throw EmptyRegionError("conjugate set: g(0) is not finite");

    // radius of prox_{lam g(|.|)}(w); g is even, so the radius lies in [0, |w|]
    auto radius = [&](ld lam) -> ld {
        if (wn == 0) return 0;
        auto obj = [&](ld r) -> ld {
            const ld gr = detail::eval_ld(g, r);
            if (!std::isfinite(gr)) return std::numeric_limits<ld>::infinity();
            return lam * gr + (r - wn) * (r - wn) / 2;
        };
        const ld hz = obj(0);
        const ld hw = obj(wn);
        ld hbest;
        ld r = detail::golden_minimize(obj, 0, wn, 0, hz, &hbest);
        if (hw <= hbest) r = wn;
        return r;
    };
    auto gap = [&](ld lam) -> ld { return mu - lam + detail::eval_ld(g, radius(lam)); };

    ld lo = 0, hi = 1;
    while (!(gap(hi) <= 0)) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300L) throw NumericalError("conjugate set: multiplier bracket not found");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16L * std::max(ld(1), hi); ++it) {
        const ld mid = (lo + hi) / 2;
        if (gap(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const ld lam = (lo + hi) / 2;
    const ld r = radius(lam);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(w.size());
    if (wn > 0) u = w * static_cast<double>(r / wn);
    const ld gr = detail::eval_ld(g, r);
    const double m = static_cast<double>(std::min(ld(mu) - lam, -gr));
    return {m, u};
}

}  // namespace pme
