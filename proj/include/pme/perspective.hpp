#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "pme/epigraph.hpp"
#include "pme/errors.hpp"
#include "pme/penalty.hpp"
#include "pme/roots.hpp"

namespace pme {

enum class AtomKind {
    ScaledLasso,  // alpha + |x|^q / kappa
    Huber,        // generalized Huber with shift alpha, slope rho, exponent q
    Berhu,        // alpha + kappa |x| + d_B(rho)^q / (q rho^(q*-1))
    BerhuStd,     // Berhu with kappa = 1, q = 2
    Vapnik,       // alpha + max(|x| - eps, 0)
    PlainSqL2,    // w |x|^2, meant for a scale pinned at 1
    Norm,         // alpha + rho |x|
    AbsSum,       // alpha + rho |x|_1 (not radial)
    Zero,         // 0
};

inline constexpr double kMaxQStar = 10.0;

/// One function of a data or penalty block, together with a positive multiplier.
///
/// The perspective of `weight * phi` is what enters the objective; weight 0
/// behaves like the Zero atom.
struct PerspectiveAtom {
    AtomKind kind = AtomKind::Zero;
    double alpha = 0.0;
    double rho = 1.0;
    double kappa = 1.0;
    double eps = 0.0;
    double q = 2.0;
    double qstar = 2.0;
    double weight = 1.0;

    static PerspectiveAtom scaled_lasso(double alpha, double kappa, double q) {
        check(alpha >= 0.0, "scaled lasso alpha must be >= 0");
        check(kappa > 0.0, "scaled lasso kappa must be > 0");
        return with_q(AtomKind::ScaledLasso, alpha, 1.0, kappa, 0.0, q);
    }
    static PerspectiveAtom huber(double alpha, double rho, double q) {
        check(alpha > 0.0, "huber alpha must be > 0");
        check(rho > 0.0, "huber rho must be > 0");
        return with_q(AtomKind::Huber, alpha, rho, 1.0, 0.0, q);
    }
    static PerspectiveAtom berhu(double alpha, double rho, double kappa, double q) {
        check(alpha > 0.0, "berhu alpha must be > 0");
        check(rho > 0.0, "berhu rho must be > 0");
        check(kappa > 0.0, "berhu kappa must be > 0");
        return with_q(AtomKind::Berhu, alpha, rho, kappa, 0.0, q);
    }
    static PerspectiveAtom berhu_std(double alpha, double rho) {
        check(alpha > 0.0, "berhu alpha must be > 0");
        check(rho > 0.0, "berhu rho must be > 0");
        return with_q(AtomKind::BerhuStd, alpha, rho, 1.0, 0.0, 2.0);
    }
    static PerspectiveAtom vapnik(double alpha, double eps) {
        check(alpha > 0.0, "vapnik alpha must be > 0");
        check(eps > 0.0, "vapnik eps must be > 0");
        PerspectiveAtom a;
        a.kind = AtomKind::Vapnik;
        a.alpha = alpha;
        a.eps = eps;
        return a;
    }
    /// w |x|^2; stored as the scaled lasso atom with alpha = 0, kappa = 1/w.
    static PerspectiveAtom plain_sq_l2(double w) {
        check(w > 0.0 && std::isfinite(w), "squared-norm weight must be > 0");
        auto a = with_q(AtomKind::PlainSqL2, 0.0, 1.0, 1.0 / w, 0.0, 2.0);
        return a;
    }
    static PerspectiveAtom norm(double alpha, double rho) {
        check(alpha >= 0.0, "norm atom alpha must be >= 0");
        check(rho >= 0.0, "norm atom rho must be >= 0");
        PerspectiveAtom a;
        a.kind = AtomKind::Norm;
        a.alpha = alpha;
        a.rho = rho;
        return a;
    }
    static PerspectiveAtom abs_sum(double alpha, double rho) {
        check(alpha >= 0.0, "abs-sum atom alpha must be >= 0");
        check(rho >= 0.0, "abs-sum atom rho must be >= 0");
        PerspectiveAtom a;
        a.kind = AtomKind::AbsSum;
        a.alpha = alpha;
        a.rho = rho;
        return a;
    }
    static PerspectiveAtom zero() { return {}; }

    /// Same atom multiplied by w >= 0.
    PerspectiveAtom times(double w) const {
        check(w >= 0.0 && std::isfinite(w), "atom multiplier must be finite and >= 0");
        PerspectiveAtom a = *this;
        a.weight *= w;
        return a;
    }

    bool radial() const { return kind != AtomKind::AbsSum; }
    bool trivial() const { return kind == AtomKind::Zero || weight == 0.0; }

private:
    static void check(bool ok, const char* what) {
        if (!ok) throw ParameterError(what);
    }
    static PerspectiveAtom with_q(AtomKind k, double alpha, double rho, double kappa, double eps, double q) {
        check(std::isfinite(alpha) && std::isfinite(rho) && std::isfinite(kappa), "atom parameters must be finite");
        check(q > 1.0 && std::isfinite(q), "atom exponent q must be > 1");
        const double qs = q / (q - 1.0);
        check(qs <= kMaxQStar, "atom exponent too close to 1 (q/(q-1) > 10)");
        PerspectiveAtom a;
        a.kind = k;
        a.alpha = alpha;
        a.rho = rho;
        a.kappa = kappa;
        a.eps = eps;
        a.q = q;
        a.qstar = qs;
        return a;
    }
};

inline std::string to_string(AtomKind k) {
    switch (k) {
        case AtomKind::ScaledLasso: return "scaled_lasso";
        case AtomKind::Huber: return "huber";
        case AtomKind::Berhu: return "berhu";
        case AtomKind::BerhuStd: return "berhu_std";
        case AtomKind::Vapnik: return "vapnik";
        case AtomKind::PlainSqL2: return "plain_sq_l2";
        case AtomKind::Norm: return "norm";
        case AtomKind::AbsSum: return "abs_sum";
        case AtomKind::Zero: return "zero";
    }
    return "?";
}

/// Output of a perspective prox. `root` holds the scalar solved for in the
/// root-finding cases and NaN elsewhere.
struct ProxResult {
    double sigma_out = 0.0;
    Vector x_out;
    int case_id = 0;
    double root = std::numeric_limits<double>::quiet_NaN();
};

/// Radial form of a prox: x_out = scale * x.
struct RadialProx {
    double sigma = 0.0;
    double scale = 0.0;
    int case_id = 0;
    double root = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

template <class T>
T pw(T base, double e) {
    return std::pow(base, static_cast<T>(e));
}

// Berhu's Delta(mu) = m + m^q*/q*, m = max(|mu| - kappa, 0)
template <class T>
T berhu_delta(T mu, double kappa, double qs) {
    const T m = std::max(std::abs(mu) - static_cast<T>(kappa), T(0));
    return m + pw(m, qs) / static_cast<T>(qs);
}

// scaled lasso coefficient (kappa/q)^(q*-1)
inline double sl_rho(const PerspectiveAtom& a) { return std::pow(a.kappa / a.q, a.qstar - 1.0); }

}  // namespace detail

/// Conjugate of the even scalar function generating a radial atom (multiplier
/// included), evaluated at nu.
template <class T>
T conjugate_radial(const PerspectiveAtom& a, T nu) {
    const T inf = std::numeric_limits<T>::infinity();
    const T w = static_cast<T>(a.weight);
    if (a.trivial()) return nu == T(0) ? T(0) : inf;
    const T v = std::abs(nu) / w;
    const T alpha = static_cast<T>(a.alpha);
    T c = T(0);
    switch (a.kind) {
        case AtomKind::ScaledLasso:
        case AtomKind::PlainSqL2:
            c = static_cast<T>(detail::sl_rho(a)) * detail::pw(v, a.qstar) / static_cast<T>(a.qstar) - alpha;
            break;
        case AtomKind::Huber:
            if (v > static_cast<T>(a.rho)) return inf;
            c = detail::pw(v, a.qstar) / static_cast<T>(a.qstar) - alpha;
            break;
        case AtomKind::Berhu:
        case AtomKind::BerhuStd:
            c = static_cast<T>(a.rho) * detail::berhu_delta(v, a.kappa, a.qstar) - alpha;
            break;
        case AtomKind::Vapnik:
            if (v > T(1)) return inf;
            c = static_cast<T>(a.eps) * v - alpha;
            break;
        case AtomKind::Norm:
            if (v > static_cast<T>(a.rho)) return inf;
            c = -alpha;
            break;
        case AtomKind::AbsSum:
            throw ParameterError("abs-sum atom is not radial");
        case AtomKind::Zero:
            return nu == T(0) ? T(0) : inf;
    }
    return w * c;
}

/// Value of the perspective of the atom at (sigma, x): sigma phi(x / sigma)
/// for sigma > 0, the recession function at sigma = 0, +inf for sigma < 0.
inline double eval_perspective(const PerspectiveAtom& a, double sigma, const Vector& x) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (sigma < 0.0 || std::isnan(sigma)) return inf;
    if (a.trivial()) return 0.0;
    const double r = (a.kind == AtomKind::AbsSum) ? x.lpNorm<1>() : x.norm();
    const double s = sigma;
    double v = 0.0;
    switch (a.kind) {
        case AtomKind::ScaledLasso:
        case AtomKind::PlainSqL2:
            if (s > 0.0) {
                v = a.alpha * s + std::pow(r, a.q) / (a.kappa * std::pow(s, a.q - 1.0));
            } else {
                v = (r == 0.0) ? 0.0 : inf;
            }
            break;
        case AtomKind::Huber: {
            if (s > 0.0) {
                if (r > s * std::pow(a.rho, a.qstar - 1.0)) {
                    v = (a.alpha - std::pow(a.rho, a.qstar) / a.qstar) * s + a.rho * r;
                } else {
                    v = a.alpha * s + std::pow(r, a.q) / (a.q * std::pow(s, a.q - 1.0));
                }
            } else {
                v = a.rho * r;
            }
            break;
        }
        case AtomKind::Berhu:
        case AtomKind::BerhuStd:
            if (s > 0.0) {
                v = a.alpha * s + a.kappa * r;
                if (r > a.rho * s)
                    v += s / (a.q * std::pow(a.rho, a.qstar - 1.0)) * std::pow(r / s - a.rho, a.q);
            } else {
                v = (r == 0.0) ? 0.0 : inf;
            }
            break;
        case AtomKind::Vapnik: v = a.alpha * s + std::max(r - a.eps * s, 0.0); break;
        case AtomKind::Norm:
        case AtomKind::AbsSum: v = a.alpha * s + a.rho * r; break;
        case AtomKind::Zero: v = 0.0; break;
    }
    return a.weight * v;
}

namespace detail {

inline RadialProx rp(double sigma, double scale, int id, double root = std::numeric_limits<double>::quiet_NaN()) {
    return {sigma, scale, id, root};
}

// root of t^(2q*-1) + q*(sigma - g alpha)/(g rho) t^(q*-1) + (q*/rho^2) t - q* r/(g rho^2) on the
// part of ]0, r/g] where the scale output stays nonnegative
inline double solve_scaled_lasso_root(double g, double alpha, double rho, double qs, double sigma, double r) {
    const double c1 = qs * (sigma - g * alpha) / (g * rho);
    const double c2 = qs / (rho * rho);
    const double c3 = qs * r / (g * rho * rho);
    auto f = [&](double t) {
        const double tq1 = std::pow(t, qs - 1.0);
        const double val = std::pow(t, 2.0 * qs - 1.0) + c1 * tq1 + c2 * t - c3;
        const double der = (2.0 * qs - 1.0) * std::pow(t, 2.0 * qs - 2.0) +
                           ((t > 0.0) ? c1 * (qs - 1.0) * std::pow(t, qs - 2.0) : kInf) + c2;
        return std::pair{val, der};
    };
    double lo = 0.0;
    if (sigma < g * alpha) lo = std::pow(qs * (g * alpha - sigma) / (g * rho), 1.0 / qs);
    const double hi = r / g;
    lo = std::min(lo, hi);
    const double tol = 1e-14 * std::max(1.0, c3);
    if (qs == 2.0) {
        const double t = solve_depressed_cubic(c1 + c2, -c3);
        if (t >= lo && t <= hi && std::abs(f(t).first) <= tol) return t;
    }
    if (f(lo).first >= 0.0) return lo;
    return solve_monotone_root(f, lo, hi, tol);
}

}  // namespace detail

/// Residual of the scaled-lasso root equation at t.
inline double scaled_lasso_root_residual(double g, double alpha, double rho, double qs, double sigma, double r,
                                         double t) {
    return std::pow(t, 2.0 * qs - 1.0) + qs * (sigma - g * alpha) / (g * rho) * std::pow(t, qs - 1.0) +
           qs / (rho * rho) * t - qs * r / (g * rho * rho);
}

/// Residual of the generalized Berhu root equation at t.
inline double berhu_root_residual(double g, double alpha, double rho, double kappa, double qs, double sigma,
                                  double r, double t) {
    const double m = std::max(t - kappa, 0.0);
    return rho * (sigma - g * alpha + g * rho * (m + std::pow(m, qs) / qs)) * (1.0 + std::pow(m, qs - 1.0)) +
           g * t - r;
}

/// Residual of the reduced cubic of the standard Berhu prox at t.
inline double berhu_std_root_residual(double g, double alpha, double rho, double sigma, double r, double t) {
    return t * t * t + (2.0 * (g + rho * (sigma - g * alpha)) / (g * rho * rho) - 1.0) * t - 2.0 * r / (g * rho * rho);
}

namespace detail {

inline RadialProx radial_scaled_lasso(double g, double alpha, double kappa, double q, double qs, double sigma,
                                      double r) {
    const double rho = std::pow(kappa / q, qs - 1.0);
    if (qs * std::pow(g, qs - 1.0) * sigma + rho * std::pow(r, qs) <= qs * std::pow(g, qs) * alpha)
        return rp(0.0, 0.0, 1);
    if (r == 0.0) return rp(sigma - g * alpha, 1.0, 2, 0.0);
    const double t = solve_scaled_lasso_root(g, alpha, rho, qs, sigma, r);
    const double s_out = sigma + g * (rho * std::pow(t, qs) / qs - alpha);
    return rp(std::max(s_out, 0.0), 1.0 - g * t / r, 2, t);
}

inline RadialProx radial_huber(double g, double alpha, double rho, double qs, double sigma, double r) {
    const double rq = std::pow(rho, qs);
    // (i)
    if (r <= g * rho && std::pow(r, qs) <= std::pow(g, qs) * qs * (alpha - sigma / g)) return rp(0.0, 0.0, 1);
    // (ii)
    if (sigma <= g * (alpha - rq / qs) && r > g * rho) return rp(0.0, 1.0 - g * rho / r, 2);
    // (iii)
    const double bound = g * std::pow(rho, qs - 1.0) * (sigma / g + std::pow(rho, 2.0 - qs) + rq / qs - alpha);
    if (sigma > g * (alpha - rq / qs) && r >= bound) return rp(sigma + g * (rq / qs - alpha), 1.0 - g * rho / r, 3);
    // (iv)
    if (qs * std::pow(g, qs - 1.0) * sigma + std::pow(r, qs) <= qs * std::pow(g, qs) * alpha) return rp(0.0, 0.0, 4);
    if (r == 0.0) return rp(sigma - g * alpha, 1.0, 4, 0.0);
    const double t = solve_scaled_lasso_root(g, alpha, 1.0, qs, sigma, r);
    const double s_out = sigma + g * (std::pow(t, qs) / qs - alpha);
    return rp(std::max(s_out, 0.0), 1.0 - g * t / r, 4, t);
}

inline RadialProx radial_berhu(double g, double alpha, double rho, double kappa, double qs, double sigma,
                               double r) {
    const double d_r = berhu_delta(r / g, kappa, qs);
    // (i)
    if (d_r <= (alpha - sigma / g) / rho) return rp(0.0, 0.0, 1);
    // (ii)
    if (r > g * kappa + rho * (sigma - g * alpha)) {
        double lo = kappa;
        if (sigma < g * alpha) {
            // smallest t with nonnegative scale output: Delta(t) = (g alpha - sigma)/(g rho)
            const double c = (g * alpha - sigma) / (g * rho);
            auto dm = [&](double m) {
                return std::pair{m + std::pow(m, qs) / qs - c, 1.0 + std::pow(m, qs - 1.0)};
            };
            lo = kappa + solve_monotone_root(dm, 0.0, c, 1e-15 * std::max(1.0, c));
        }
        const double hi = r / g;
        lo = std::min(lo, hi);
        auto f = [&](double t) {
            const double m = std::max(t - kappa, 0.0);
            const double mq1 = std::pow(m, qs - 1.0);
            const double s = sigma - g * alpha + g * rho * (m + std::pow(m, qs) / qs);
            const double val = rho * s * (1.0 + mq1) + g * t - r;
            const double dmq1 = (m > 0.0) ? (qs - 1.0) * std::pow(m, qs - 2.0) : kInf;
            const double der = rho * g * rho * (1.0 + mq1) * (1.0 + mq1) + rho * s * dmq1 + g;
            return std::pair{val, std::isfinite(der) ? der : kInf};
        };
        const double tol = 1e-14 * std::max(1.0, r);
        const double t = (f(lo).first >= 0.0) ? lo : solve_monotone_root(f, lo, hi, tol);
        const double s_out = sigma - g * alpha + g * rho * berhu_delta(t, kappa, qs);
        return rp(std::max(s_out, 0.0), 1.0 - g * t / r, 2, t);
    }
    // (iii)
    if (g * kappa <= r && r <= g * kappa + rho * (sigma - g * alpha)) return rp(sigma - g * alpha, 1.0 - g * kappa / r, 3);
    // (iv)
    return rp(std::max(sigma - g * alpha, 0.0), 0.0, 4);
}

inline RadialProx radial_berhu_std(double g, double alpha, double rho, double sigma, double r) {
    if (std::max(r * r - g * g, 0.0) <= 2.0 * g * (g * alpha - sigma) / rho) return rp(0.0, 0.0, 1);
    if (sigma > g * alpha && r <= g) return rp(sigma - g * alpha, 0.0, 2);
    if (sigma > g * alpha && g < r && r <= g + rho * (sigma - g * alpha)) return rp(sigma - g * alpha, 1.0 - g / r, 3);
    // fourth case: the complement of the first three
    const double pc = 2.0 * (g + rho * (sigma - g * alpha)) / (g * rho * rho) - 1.0;
    const double qc = -2.0 * r / (g * rho * rho);
    const double t = solve_depressed_cubic(pc, qc);
    const double denom = g + rho * (sigma - g * alpha + g * rho * (t * t - 1.0) / 2.0);
    const double pnorm = r / denom;  // |p|
    const double s_out = sigma - g * alpha + g * rho * (pnorm * pnorm - 1.0) / 2.0;
    return rp(std::max(s_out, 0.0), 1.0 - g / denom, 4, t);
}

inline RadialProx radial_vapnik(double g, double alpha, double eps, double sigma, double r) {
    const double upper = eps * sigma + g * (1.0 + eps * (eps - alpha));
    if (sigma + eps * r <= g * alpha && r <= g) return rp(0.0, 0.0, 1);
    if (sigma <= g * (alpha - eps) && r > g) return rp(0.0, 1.0 - g / r, 2);
    if (sigma > g * (alpha - eps) && r >= upper) return rp(sigma + g * (eps - alpha), 1.0 - g / r, 3);
    if (sigma + eps * r > g * alpha && eps * (sigma - g * alpha) < r && r < upper) {
        const double c = (sigma + eps * r - g * alpha) / (1.0 + eps * eps);
        return rp(c, c * eps / r, 4);
    }
    if (sigma >= g * alpha && r <= eps * (sigma - g * alpha)) return rp(sigma - g * alpha, 1.0, 5);
    return rp(std::numeric_limits<double>::quiet_NaN(), 0.0, 0);
}

}  // namespace detail

/// Prox of gamma times the perspective of a radial function given its scalar
/// conjugate, following the planar reduction: threshold test, the x = 0 case,
/// otherwise projection onto {(chi, nu) : chi + phi*(nu) <= 0}.
template <class F>
RadialProx radial_prox_generic(F&& phi_star, double gamma, double sigma, double r) {
    if (!(gamma > 0.0)) throw DomainError("perspective prox: gamma must be > 0");
    const long double ps = static_cast<long double>(phi_star(static_cast<long double>(r) / gamma));
    if (sigma + gamma * ps <= 0.0L) return detail::rp(0.0, 0.0, 1);
    const double phi0 = -static_cast<double>(phi_star(0.0L));
    if (r == 0.0 && sigma > gamma * phi0) return detail::rp(sigma - gamma * phi0, 1.0, 2);
    auto [chi, nu] = project_epi_region_2d(phi_star, sigma / gamma, r / gamma);
    return detail::rp(std::max(sigma - gamma * chi, 0.0), (r > 0.0) ? 1.0 - gamma * nu / r : 0.0, 3);
}

/// Radial prox of the atom's perspective, no allocation.
inline RadialProx radial_prox(const PerspectiveAtom& a, double gamma, double sigma, double r) {
    if (!(gamma > 0.0)) throw DomainError("perspective prox: gamma must be > 0");
    if (a.trivial()) return detail::rp(std::max(sigma, 0.0), 1.0, 1);
    const double g = gamma * a.weight;
    switch (a.kind) {
        case AtomKind::ScaledLasso:
        case AtomKind::PlainSqL2:
            return detail::radial_scaled_lasso(g, a.alpha, a.kappa, a.q, a.qstar, sigma, r);
        case AtomKind::Huber: return detail::radial_huber(g, a.alpha, a.rho, a.qstar, sigma, r);
        case AtomKind::Berhu: return detail::radial_berhu(g, a.alpha, a.rho, a.kappa, a.qstar, sigma, r);
        case AtomKind::BerhuStd: return detail::radial_berhu_std(g, a.alpha, a.rho, sigma, r);
        case AtomKind::Vapnik: {
            auto out = detail::radial_vapnik(g, a.alpha, a.eps, sigma, r);
            if (out.case_id == 0) {
                auto phi_star = [&a](long double v) { return conjugate_radial(a, v); };
                out = radial_prox_generic(phi_star, gamma, sigma, r);
                out.case_id = 0;
            }
            return out;
        }
        case AtomKind::Norm: {
            const double s = std::max(sigma - g * a.alpha, 0.0);
            const double k = (r > g * a.rho) ? 1.0 - g * a.rho / r : 0.0;
            return detail::rp(s, k, 1);
        }
        case AtomKind::AbsSum: throw ParameterError("abs-sum atom is not radial");
        case AtomKind::Zero: break;
    }
    return detail::rp(std::max(sigma, 0.0), 1.0, 1);
}

inline ProxResult to_prox_result(const RadialProx& rp, const Vector& x) {
    ProxResult out;
    out.sigma_out = rp.sigma;
    out.x_out = (rp.scale == 0.0) ? Vector::Zero(x.size()).eval() : (rp.scale * x).eval();
    out.case_id = rp.case_id;
    out.root = rp.root;
    return out;
}

/// Prox of gamma times the perspective of any atom.
inline ProxResult prox_perspective(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    if (a.kind == AtomKind::AbsSum && !a.trivial()) {
        if (!(gamma > 0.0)) throw DomainError("perspective prox: gamma must be > 0");
        const double g = gamma * a.weight;
        ProxResult out;
        out.sigma_out = std::max(sigma - g * a.alpha, 0.0);
        out.x_out = x.unaryExpr([t = g * a.rho](double v) { return soft_threshold(v, t); });
        out.case_id = 1;
        return out;
    }
    return to_prox_result(radial_prox(a, gamma, sigma, x.norm()), x);
}

namespace detail {
inline void require_kind(const PerspectiveAtom& a, AtomKind k1, AtomKind k2, const char* name) {
    if (a.kind != k1 && a.kind != k2) throw ParameterError(std::string(name) + ": wrong atom kind " + to_string(a.kind));
}
}  // namespace detail

inline ProxResult prox_persp_scaled_lasso(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    detail::require_kind(a, AtomKind::ScaledLasso, AtomKind::PlainSqL2, "prox_persp_scaled_lasso");
    return prox_perspective(a, gamma, sigma, x);
}
inline ProxResult prox_persp_huber(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    detail::require_kind(a, AtomKind::Huber, AtomKind::Huber, "prox_persp_huber");
    return prox_perspective(a, gamma, sigma, x);
}
inline ProxResult prox_persp_berhu(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    detail::require_kind(a, AtomKind::Berhu, AtomKind::Berhu, "prox_persp_berhu");
    return prox_perspective(a, gamma, sigma, x);
}
inline ProxResult prox_persp_berhu_std(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    detail::require_kind(a, AtomKind::BerhuStd, AtomKind::BerhuStd, "prox_persp_berhu_std");
    return prox_perspective(a, gamma, sigma, x);
}
inline ProxResult prox_persp_vapnik(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    detail::require_kind(a, AtomKind::Vapnik, AtomKind::Vapnik, "prox_persp_vapnik");
    return prox_perspective(a, gamma, sigma, x);
}

/// Prox through the numeric planar projection, for any even scalar conjugate.
template <class F>
ProxResult prox_persp_radial_generic(F&& phi_star_1d, double gamma, double sigma, const Vector& x) {
    return to_prox_result(radial_prox_generic(phi_star_1d, gamma, sigma, x.norm()), x);
}

/// Generic prox for a radial atom, driven by its own conjugate.
inline ProxResult prox_persp_radial_generic(const PerspectiveAtom& a, double gamma, double sigma, const Vector& x) {
    auto phi_star = [&a](long double v) { return conjugate_radial(a, v); };
    return prox_persp_radial_generic(phi_star, gamma, sigma, x);
}

}  // namespace pme
