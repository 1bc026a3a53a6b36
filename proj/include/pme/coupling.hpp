#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"

namespace pme {

enum class CouplingKind { Free, Pinned, GroupAverage, LowerBound, NaturalLassoBarrier };

/// Constraint or extra term acting on a vector of scale variables.
struct ScaleCoupling {
    CouplingKind kind = CouplingKind::Free;
    double value = 0.0;                     // Pinned value, LowerBound eps, or barrier constant c
    std::vector<std::vector<int>> groups;   // GroupAverage partition, 0-based indices

    static ScaleCoupling free() { return {}; }
    static ScaleCoupling pinned(double v) { return {CouplingKind::Pinned, v, {}}; }
    static ScaleCoupling group_average(std::vector<std::vector<int>> g) {
        return {CouplingKind::GroupAverage, 0.0, std::move(g)};
    }
    /// A single group holding indices 0..m-1.
    static ScaleCoupling all_equal(int m) {
        std::vector<int> g(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = i;
        return group_average({std::move(g)});
    }
    static ScaleCoupling lower_bound(double eps) { return {CouplingKind::LowerBound, eps, {}}; }
    static ScaleCoupling natural_lasso_barrier(double c) { return {CouplingKind::NaturalLassoBarrier, c, {}}; }
};

inline std::string to_string(CouplingKind k) {
    switch (k) {
        case CouplingKind::Free: return "free";
        case CouplingKind::Pinned: return "pinned";
        case CouplingKind::GroupAverage: return "group_average";
        case CouplingKind::LowerBound: return "lower_bound";
        case CouplingKind::NaturalLassoBarrier: return "natural_lasso_barrier";
    }
    return "?";
}

/// Diagnostics for a coupling over `m` scales; empty when valid.
inline std::vector<std::string> validate(const ScaleCoupling& c, int m) {
    std::vector<std::string> out;
    switch (c.kind) {
        case CouplingKind::Free: break;
        case CouplingKind::Pinned:
            if (!std::isfinite(c.value)) out.push_back("pinned scale value must be finite");
            break;
        case CouplingKind::LowerBound:
            if (!(c.value > 0.0) || !std::isfinite(c.value)) out.push_back("lower bound eps must be > 0");
            break;
        case CouplingKind::NaturalLassoBarrier:
            if (!(c.value > 0.0) || !std::isfinite(c.value)) out.push_back("barrier constant must be > 0");
            break;
        case CouplingKind::GroupAverage: {
            std::vector<int> seen(static_cast<std::size_t>(std::max(m, 0)), 0);
            for (const auto& g : c.groups) {
                if (g.empty()) out.push_back("group partition contains an empty group");
                for (int i : g) {
                    if (i < 0 || i >= m) {
                        out.push_back("group index " + std::to_string(i) + " out of range [0, " +
                                      std::to_string(m) + ")");
                    } else {
                        ++seen[static_cast<std::size_t>(i)];
                    }
                }
            }
            for (int i = 0; i < m; ++i) {
                const int k = seen[static_cast<std::size_t>(i)];
                if (k != 1)
                    out.push_back("scale index " + std::to_string(i) + " covered " + std::to_string(k) +
                                  " times by the group partition");
            }
            break;
        }
    }
    return out;
}

/// Number of scales the coupling can act on, or -1 when any length works.
inline int coupling_arity(const ScaleCoupling& c) {
    if (c.kind != CouplingKind::GroupAverage) return -1;
    int m = 0;
    for (const auto& g : c.groups) m += static_cast<int>(g.size());
    return m;
}

/// prox of gamma times the coupling function, written into `out`.
inline void prox_scale_coupling_into(const ScaleCoupling& c, double gamma, const Eigen::VectorXd& v,
                                     Eigen::VectorXd& out) {
    if (!(gamma > 0.0)) throw DomainError("prox_scale_coupling: gamma must be > 0");
    const int arity = coupling_arity(c);
    if (arity >= 0 && arity != v.size())
        throw ShapeError("prox_scale_coupling: coupling covers " + std::to_string(arity) + " scales, got " +
                         std::to_string(v.size()));
    out.resize(v.size());
    switch (c.kind) {
        case CouplingKind::Free: out = v; return;
        case CouplingKind::Pinned: out.setConstant(c.value); return;
        case CouplingKind::LowerBound: out = v.cwiseMax(c.value); return;
        case CouplingKind::NaturalLassoBarrier:
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const double u = v[i] - gamma * c.value;
                // positive root of tau^2 - u tau - gamma/2, written without cancellation
                out[i] = (u >= 0.0) ? 0.5 * (u + std::sqrt(u * u + 2.0 * gamma))
                                    : gamma / (std::sqrt(u * u + 2.0 * gamma) - u);
            }
            return;
        case CouplingKind::GroupAverage:
            for (const auto& g : c.groups) {
                double sum = 0.0;
                for (int i : g) sum += v[i];
                const double mean = sum / static_cast<double>(g.size());
                for (int i : g) out[i] = mean;
            }
            return;
    }
}

inline Eigen::VectorXd prox_scale_coupling(const ScaleCoupling& c, double gamma, const Eigen::VectorXd& v) {
    Eigen::VectorXd out;
    prox_scale_coupling_into(c, gamma, v, out);
    return out;
}

/// Value of the coupling function (an indicator or the barrier) at v.
inline double eval_scale_coupling(const ScaleCoupling& c, const Eigen::VectorXd& v, double feas_tol = 1e-9) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (c.kind) {
        case CouplingKind::Free: return 0.0;
        case CouplingKind::Pinned:
            return ((v.array() - c.value).abs() <= feas_tol * (1.0 + std::abs(c.value))).all() ? 0.0 : inf;
        case CouplingKind::LowerBound: return (v.array() >= c.value - feas_tol).all() ? 0.0 : inf;
        case CouplingKind::NaturalLassoBarrier: {
            double s = 0.0;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                if (!(v[i] > 0.0)) return inf;
                s += -0.5 * std::log(v[i]) + c.value * v[i];
            }
            return s;
        }
        case CouplingKind::GroupAverage:
            for (const auto& g : c.groups) {
                for (int i : g) {
                    if (std::abs(v[i] - v[g.front()]) > feas_tol * (1.0 + std::abs(v[g.front()]))) return inf;
                }
            }
            return 0.0;
    }
    return 0.0;
}

}  // namespace pme
