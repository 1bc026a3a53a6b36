#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/roots.hpp"

namespace pme {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PenaltyKind {
    None,               // 0
    L1,                 // alpha1 |b|_1
    WeightedL1,         // alpha1 sum w_i |b_i|
    SqL2,               // alpha2 |b|_2^2
    L2Norm,             // alpha2 |b|_2
    ElasticNet,         // alpha1 |b|_1 + alpha2 |b|_2^2
    PowerR,             // alpha1 |b|_1 + alpha2 sum |b_i|^r
    L1PlusLinearShift,  // alpha1 |b|_1 - <shift, b>
    L1PlusL2Norm,       // alpha1 |b|_1 + alpha2 |b|_2
};

/// The separable regularizer applied directly to the coefficient vector.
struct SeparablePenalty {
    PenaltyKind kind = PenaltyKind::None;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double r = 2.0;
    Vector weights;
    Vector shift;

    static SeparablePenalty none() { return {}; }
    static SeparablePenalty l1(double a1) { return make(PenaltyKind::L1, a1, 0.0); }
    static SeparablePenalty weighted_l1(double a1, Vector w) {
        auto pen = make(PenaltyKind::WeightedL1, a1, 0.0);
        pen.weights = std::move(w);
        return pen;
    }
    static SeparablePenalty sq_l2(double a2) { return make(PenaltyKind::SqL2, 0.0, a2); }
    static SeparablePenalty l2_norm(double a2) { return make(PenaltyKind::L2Norm, 0.0, a2); }
    static SeparablePenalty elastic_net(double a1, double a2) { return make(PenaltyKind::ElasticNet, a1, a2); }
    static SeparablePenalty power_r(double a1, double a2, double r) {
        auto pen = make(PenaltyKind::PowerR, a1, a2);
        pen.r = r;
        return pen;
    }
    static SeparablePenalty l1_linear_shift(double a1, Vector shift) {
        auto pen = make(PenaltyKind::L1PlusLinearShift, a1, 0.0);
        pen.shift = std::move(shift);
        return pen;
    }
    static SeparablePenalty l1_plus_l2_norm(double a1, double a2) {
        return make(PenaltyKind::L1PlusL2Norm, a1, a2);
    }

private:
    static SeparablePenalty make(PenaltyKind k, double a1, double a2) {
        SeparablePenalty pen;
        pen.kind = k;
        pen.alpha1 = a1;
        pen.alpha2 = a2;
        return pen;
    }
};

inline std::string to_string(PenaltyKind k) {
    switch (k) {
        case PenaltyKind::None: return "none";
        case PenaltyKind::L1: return "l1";
        case PenaltyKind::WeightedL1: return "weighted_l1";
        case PenaltyKind::SqL2: return "sq_l2";
        case PenaltyKind::L2Norm: return "l2_norm";
        case PenaltyKind::ElasticNet: return "elastic_net";
        case PenaltyKind::PowerR: return "power_r";
        case PenaltyKind::L1PlusLinearShift: return "l1_linear_shift";
        case PenaltyKind::L1PlusL2Norm: return "l1_plus_l2_norm";
    }
    return "?";
}

/// Invariant violations; empty when the penalty is usable for dimension p.
inline std::vector<std::string> validate(const SeparablePenalty& pen, Eigen::Index p) {
    std::vector<std::string> out;
    if (!(pen.alpha1 >= 0.0)) out.push_back("penalty alpha1 must be >= 0");
    if (!(pen.alpha2 >= 0.0)) out.push_back("penalty alpha2 must be >= 0");
    if (pen.kind == PenaltyKind::PowerR && !(pen.r >= 1.0 && pen.r <= 2.0))
        out.push_back("penalty exponent r must lie in [1, 2]");
    if (pen.kind == PenaltyKind::WeightedL1) {
        if (pen.weights.size() != p) out.push_back("penalty weights length differs from p");
        if ((pen.weights.array() < 0.0).any()) out.push_back("penalty weights must be >= 0");
    }
    if (pen.kind == PenaltyKind::L1PlusLinearShift && pen.shift.size() != p)
        out.push_back("penalty shift length differs from p");
    return out;
}

inline double soft_threshold(double v, double thresh) {
    if (v > thresh) return v - thresh;
    if (v < -thresh) return v + thresh;
    return 0.0;
}

namespace detail {

// argmin_y  c |y|^r + (y - v)^2 / 2  for y of the sign of v, r in ]1,2[
inline double prox_power_scalar(double v, double c, double r) {
    const double a = std::abs(v);
    if (a == 0.0 || c == 0.0) return v;
    auto f = [&](double y) {
        const double g = y + c * r * std::pow(y, r - 1.0) - a;
        const double dg = (y > 0.0) ? 1.0 + c * r * (r - 1.0) * std::pow(y, r - 2.0) : kInf;
        return std::pair{g, dg};
    };
    const double y = solve_monotone_root(f, 0.0, a, 1e-14 * std::max(1.0, a));
    return std::copysign(y, v);
}

}  // namespace detail

/// argmin_y pen(y) + |x - y|^2 / (2 gamma).
inline Vector prox_separable_penalty(const SeparablePenalty& pen, double gamma, const Vector& x) {
    if (!(gamma > 0.0)) throw DomainError("prox_separable_penalty: gamma must be > 0");
    const double t1 = gamma * pen.alpha1;
    const double t2 = gamma * pen.alpha2;
    auto soft = [&](const Vector& v, double t) {
        return v.unaryExpr([t](double e) { return soft_threshold(e, t); }).eval();
    };
    auto block_shrink = [](const Vector& v, double t) -> Vector {
        const double nv = v.norm();
        if (nv <= t) return Vector::Zero(v.size());
        return (1.0 - t / nv) * v;
    };

    switch (pen.kind) {
        case PenaltyKind::None: return x;
        case PenaltyKind::L1: return soft(x, t1);
        case PenaltyKind::WeightedL1: {
            if (pen.weights.size() != x.size()) throw ShapeError("weighted l1: weights length mismatch");
            Vector out(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = soft_threshold(x[i], t1 * pen.weights[i]);
            return out;
        }
        case PenaltyKind::SqL2: return x / (1.0 + 2.0 * t2);
        case PenaltyKind::L2Norm: return block_shrink(x, t2);
        case PenaltyKind::ElasticNet: return soft(x, t1) / (1.0 + 2.0 * t2);
        case PenaltyKind::L1PlusL2Norm: return block_shrink(soft(x, t1), t2);
        case PenaltyKind::L1PlusLinearShift: {
            if (pen.shift.size() != x.size()) throw ShapeError("linear shift length mismatch");
            return soft(x + gamma * pen.shift, t1);
        }
        case PenaltyKind::PowerR: {
            if (pen.r < 1.0) throw DomainError("power penalty requires r >= 1");
            Vector v = soft(x, t1);
            if (t2 == 0.0) return v;
            if (pen.r == 1.0) return soft(v, t2);
            if (pen.r == 2.0) return v / (1.0 + 2.0 * t2);
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = detail::prox_power_scalar(v[i], t2, pen.r);
            return v;
        }
    }
    return x;
}

inline double eval_penalty(const SeparablePenalty& pen, const Vector& b) {
    const double l1 = b.lpNorm<1>();
    switch (pen.kind) {
        case PenaltyKind::None: return 0.0;
        case PenaltyKind::L1: return pen.alpha1 * l1;
        case PenaltyKind::WeightedL1: return pen.alpha1 * pen.weights.dot(b.cwiseAbs());
        case PenaltyKind::SqL2: return pen.alpha2 * b.squaredNorm();
        case PenaltyKind::L2Norm: return pen.alpha2 * b.norm();
        case PenaltyKind::ElasticNet: return pen.alpha1 * l1 + pen.alpha2 * b.squaredNorm();
        case PenaltyKind::L1PlusL2Norm: return pen.alpha1 * l1 + pen.alpha2 * b.norm();
        case PenaltyKind::L1PlusLinearShift: return pen.alpha1 * l1 - pen.shift.dot(b);
        case PenaltyKind::PowerR:
            return pen.alpha1 * l1 + pen.alpha2 * b.cwiseAbs().array().pow(pen.r).sum();
    }
    return 0.0;
}

}  // namespace pme
