#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/coupling.hpp"
#include "pme/errors.hpp"
#include "pme/model.hpp"
#include "pme/penalty.hpp"
#include "pme/perspective.hpp"
#include "pme/stacked.hpp"

namespace pme {

struct SolverOptions {
    double gamma = 1.0;
    double mu = 1.9;
    double eps_tol = 1e-4;
    long max_iter = 100000;
    bool record_history = false;
    // also require the scale change to fall below 10 * eps_tol
    bool check_scales = true;
};

inline std::vector<std::string> validate(const SolverOptions& o) {
    std::vector<std::string> out;
    if (!(o.gamma > 0.0) || !std::isfinite(o.gamma)) out.push_back("gamma must be > 0");
    if (!(o.mu > 0.0 && o.mu < 2.0)) out.push_back("mu must lie in ]0, 2[");
    if (!(o.eps_tol > 0.0)) out.push_back("eps_tol must be > 0");
    if (o.max_iter <= 0) out.push_back("max_iter must be positive");
    return out;
}

/// Douglas-Rachford iterates plus the quantities derived from them.
struct SolverState {
    Vector x_s, x_t, x_b;  // primal copies
    Vector h_s, h_t, h_b;  // graph copies, h_b has one entry per stacked row
    Vector s, t, b;        // latest (s_k, t_k, b_k)
    Vector z_s, z_t, z_b;  // latest prox outputs of the couplings and theta
    long iteration = 0;
    double residual = std::numeric_limits<double>::infinity();        // |b_k - b_{k-1}|
    double scale_residual = std::numeric_limits<double>::infinity();  // |(s,t)_k - (s,t)_{k-1}|

    // scratch
    Vector q_b, c_b, arg_b, d_b, s_prev, t_prev, b_prev;
};

inline SolverState initial_state(const StackedProblem& sp, int p) {
    SolverState st;
    st.x_s = Vector::Zero(sp.N);
    st.x_t = Vector::Zero(sp.P);
    st.x_b = Vector::Zero(p);
    st.h_s = Vector::Zero(sp.N);
    st.h_t = Vector::Zero(sp.P);
    st.h_b = Vector::Zero(sp.m());
    st.s = st.x_s;
    st.t = st.x_t;
    st.b = st.x_b;
    st.z_s = st.x_s;
    st.z_t = st.x_t;
    st.z_b = st.x_b;
    return st;
}

inline bool state_matches(const SolverState& st, const StackedProblem& sp, int p) {
    return st.x_s.size() == sp.N && st.h_s.size() == sp.N && st.x_t.size() == sp.P && st.h_t.size() == sp.P &&
           st.x_b.size() == p && st.h_b.size() == sp.m();
}

namespace detail {

/// Scale vector made admissible for the coupling and the perspective domain.
inline Vector feasible_scales(const ScaleCoupling& c, const Vector& v, const Vector& fallback) {
    Vector out;
    switch (c.kind) {
        case CouplingKind::Free: return v.cwiseMax(0.0);
        case CouplingKind::Pinned: return Vector::Constant(v.size(), c.value);
        case CouplingKind::LowerBound: return v.cwiseMax(c.value);
        case CouplingKind::GroupAverage:
            prox_scale_coupling_into(c, 1.0, v, out);
            return out.cwiseMax(0.0);
        case CouplingKind::NaturalLassoBarrier:
            out = v;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                if (!(out[i] > 0.0)) out[i] = fallback[i];
            return out;
    }
    return v;
}

/// Replaces each independently coupled scale paired with a scaled-lasso atom
/// by the exact minimizer of its term at fixed b, when that lowers the term.
/// A zero scale facing a residual of rounding size makes the term +inf (or
/// huge) although the iterates have converged; the minimizer removes that.
inline void refine_scales(const ScaleCoupling& c, Vector& scales, const std::vector<const PerspectiveAtom*>& atoms,
                          const std::vector<Vector>& residuals) {
    if (c.kind != CouplingKind::Free && c.kind != CouplingKind::LowerBound) return;
    const double lo = (c.kind == CouplingKind::LowerBound) ? c.value : 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const PerspectiveAtom& a = *atoms[i];
        if (a.kind != AtomKind::ScaledLasso || !(a.alpha > 0.0) || !(a.q > 1.0)) continue;
        const auto k = static_cast<Eigen::Index>(i);
        // d/ds [alpha s + |r|^q s^(1-q) / kappa] = 0
        const double cand =
            std::max(lo, residuals[i].norm() * std::pow((a.q - 1.0) / (a.kappa * a.alpha), 1.0 / a.q));
        const double now = eval_perspective(a, scales[k], residuals[i]);
        if (eval_perspective(a, cand, residuals[i]) < now) scales[k] = cand;
    }
}

inline void refine_solution_scales(const ProblemSpec& spec, const Vector& b, Vector& s, Vector& t) {
    std::vector<const PerspectiveAtom*> atoms;
    std::vector<Vector> res;
    for (const auto& d : spec.data) {
        atoms.push_back(&d.atom);
        res.push_back(d.X * b - d.y);
    }
    refine_scales(spec.sigma_coupling, s, atoms, res);
    if (spec.penalties.empty()) return;
    atoms.clear();
    res.clear();
    for (const auto& pb : spec.penalties) {
        atoms.push_back(&pb.atom);
        res.push_back(pb.L.apply(b));
    }
    refine_scales(spec.tau_coupling, t, atoms, res);
}

}  // namespace detail

/// One pass of the Douglas-Rachford iteration on the product space.
inline void dr_step(SolverState& st, const StackedProblem& sp, const ProblemSpec& spec, const SolverOptions& opts) {
    if (!state_matches(st, sp, spec.p)) throw ShapeError("dr_step: state dimensions do not match the problem");
    const double gamma = opts.gamma;
    const double mu = opts.mu;

    st.s_prev = st.s;
    st.t_prev = st.t;
    st.b_prev = st.b;

    // q-step and the graph projection
    st.q_b.noalias() = sp.A * st.x_b;
    st.q_b -= st.h_b;
    st.s = 0.5 * (st.x_s + st.h_s);  // x_s - (x_s - h_s)/2
    st.t = 0.5 * (st.x_t + st.h_t);
    st.b = st.x_b - sp.A.transpose() * sp.gram.llt.solve(st.q_b);

    // couplings and theta on the reflected points
    prox_scale_coupling_into(spec.sigma_coupling, gamma, (2.0 * st.s - st.x_s).eval(), st.z_s);
    if (sp.P > 0) {
        prox_scale_coupling_into(spec.tau_coupling, gamma, (2.0 * st.t - st.x_t).eval(), st.z_t);
    } else {
        st.z_t.resize(0);
    }
    st.z_b = prox_separable_penalty(spec.theta, gamma, 2.0 * st.b - st.x_b);
    st.x_s += mu * (st.z_s - st.s);
    st.x_t += mu * (st.z_t - st.t);
    st.x_b += mu * (st.z_b - st.b);

    // per-block perspective proxes on the reflected pairs
    st.c_b.noalias() = sp.A * st.b;
    st.arg_b = 2.0 * st.c_b - st.h_b - sp.w;
    st.d_b.resize(sp.m());
    for (const auto& blk : sp.blocks) {
        const PerspectiveAtom& atom = blk.is_data ? spec.data[static_cast<std::size_t>(blk.index)].atom
                                                  : spec.penalties[static_cast<std::size_t>(blk.index)].atom;
        const double scale_k = blk.is_data ? st.s[blk.index] : st.t[blk.index];
        double& eta = blk.is_data ? st.h_s[blk.index] : st.h_t[blk.index];
        const double sigma_arg = 2.0 * scale_k - eta;
        auto seg = st.arg_b.segment(blk.offset, blk.rows);
        double delta;
        if (atom.radial()) {
            const RadialProx rp = radial_prox(atom, gamma, sigma_arg, seg.norm());
            delta = rp.sigma;
            st.d_b.segment(blk.offset, blk.rows) = rp.scale * seg;
        } else {
            const ProxResult pr = prox_perspective(atom, gamma, sigma_arg, seg);
            delta = pr.sigma_out;
            st.d_b.segment(blk.offset, blk.rows) = pr.x_out;
        }
        // (0, y_i) + prox(...) on data blocks; w is zero on penalty rows
        st.d_b.segment(blk.offset, blk.rows) += sp.w.segment(blk.offset, blk.rows);
        eta += mu * (delta - scale_k);
    }
    st.h_b += mu * (st.d_b - st.c_b);

    ++st.iteration;
    if (!st.x_b.allFinite() || !st.h_b.allFinite() || !st.x_s.allFinite() || !st.h_s.allFinite() ||
        !st.x_t.allFinite() || !st.h_t.allFinite() || !st.b.allFinite())
        throw NonFiniteError("dr_step: non-finite iterate", st.iteration);

    st.residual = (st.b - st.b_prev).norm();
    st.scale_residual = std::sqrt((st.s - st.s_prev).squaredNorm() + (st.t - st.t_prev).squaredNorm());
}

struct Solution {
    Vector b, s, t;
    double objective = std::numeric_limits<double>::quiet_NaN();
    long iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
    SolverState state;  // terminal iterate, reusable as a warm start
};

/// Iterates dr_step until |b_k - b_{k+1}| < eps_tol (and the scale change is
/// below 10 eps_tol) or max_iter is reached.
inline Solution solve(const ProblemSpec& spec, const StackedProblem& sp, const SolverOptions& opts,
                      const SolverState* init = nullptr) {
    const auto issues = validate(opts);
    if (!issues.empty()) throw ParameterError("solver options: " + issues.front());
    SolverState st = (init && state_matches(*init, sp, spec.p)) ? *init : initial_state(sp, spec.p);
    if (init) {
        // warm start restarts the residual bookkeeping
        st.iteration = 0;
        st.residual = std::numeric_limits<double>::infinity();
        st.scale_residual = std::numeric_limits<double>::infinity();
    }
    Solution sol;
    bool first = true;
    for (long k = 0; k < opts.max_iter; ++k) {
        dr_step(st, sp, spec, opts);
        if (first) {
            // no previous b_k yet
            first = false;
            st.residual = std::numeric_limits<double>::infinity();
            continue;
        }
        if (opts.record_history) sol.residual_history.push_back(st.residual);
        const bool b_ok = st.residual < opts.eps_tol;
        const bool s_ok = !opts.check_scales || st.scale_residual < 10.0 * opts.eps_tol;
        if (b_ok && s_ok) {
            sol.converged = true;
            break;
        }
    }
    sol.iterations = st.iteration;
    sol.b = st.z_b;
    sol.s = detail::feasible_scales(spec.sigma_coupling, st.s, st.z_s);
    sol.t = (sp.P > 0) ? detail::feasible_scales(spec.tau_coupling, st.t, st.z_t) : Vector(Vector::Zero(0));
    detail::refine_solution_scales(spec, sol.b, sol.s, sol.t);
    sol.objective = evaluate_objective(spec, sol.s, sol.t, sol.b);
    sol.state = std::move(st);
    return sol;
}

inline Solution solve(const ProblemSpec& spec, const SolverOptions& opts, const SolverState* init = nullptr) {
    const StackedProblem sp = assemble_stacked(spec);
    return solve(spec, sp, opts, init);
}

}  // namespace pme
