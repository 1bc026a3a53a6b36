#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/metrics.hpp"
#include "pme/model.hpp"
#include "pme/solver.hpp"
#include "pme/stacked.hpp"

namespace pme {

/// `num` points from lo to hi, equally spaced in log (or linear) scale.
inline std::vector<double> make_grid(double lo, double hi, int num, bool log_spacing = true) {
    if (num <= 0) throw ParameterError("grid needs at least one point");
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw ParameterError("grid needs 0 < lo <= hi");
    if (num > 1 && !(hi > lo)) throw ParameterError("grid with several points needs lo < hi");
    std::vector<double> g(static_cast<std::size_t>(num));
    if (num == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < num; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(num - 1);
        g[static_cast<std::size_t>(i)] =
            log_spacing ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

struct PathPoint {
    double alpha = 0.0;
    Vector b, s, t;
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    long iterations = 0;
    double mae = std::numeric_limits<double>::quiet_NaN();
    std::string error;  // empty unless the solve failed
};

struct PathResult {
    std::string key;
    std::vector<double> alphas;
    std::vector<PathPoint> points;
    int argmin = -1;  // index of the smallest finite MAE

    int nonzeros(std::size_t i, double tol = 0.0) const {
        return static_cast<int>((points[i].b.array().abs() > tol).count());
    }
};

struct PathOptions {
    bool warm_start = true;
    int threads = 1;          // used only for cold starts
    std::string key;          // parameter swept; model default when empty
    // MAE of a coefficient vector; defaults to |X b - y|_1 / n
    std::function<double(const Vector&)> score;
};

/// Solves the named model at every grid value of the swept parameter.
inline PathResult run_path(const std::string& model, const ModelParams& base, const Matrix& X, const Vector& y,
                           const std::vector<double>& grid, const SolverOptions& opts, const PathOptions& popts = {}) {
    if (grid.empty()) throw ParameterError("run_path: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw ParameterError("run_path: grid values must be > 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ParameterError("run_path: grid must be strictly increasing");
    }
    PathResult res;
    res.key = popts.key.empty() ? model_info(model).path_key : popts.key;
    res.alphas = grid;
    res.points.resize(grid.size());

    auto score = popts.score;
    if (!score) score = [&X, &y](const Vector& b) { return mae(X * b, y); };

    // the stacked operator does not depend on the swept parameter
    const ProblemSpec first = build_model(model, base.with(res.key, grid.front()), X, y);
    const StackedProblem sp = assemble_stacked(first);

    auto solve_one = [&](std::size_t i, const SolverState* warm) -> std::optional<SolverState> {
        PathPoint& pt = res.points[i];
        pt.alpha = grid[i];
        try {
            const ProblemSpec spec = (i == 0) ? first : build_model(model, base.with(res.key, grid[i]), X, y);
            Solution sol = solve(spec, sp, opts, warm);
            pt.b = sol.b;
            pt.s = sol.s;
            pt.t = sol.t;
            pt.objective = sol.objective;
            pt.converged = sol.converged;
            pt.iterations = sol.iterations;
            pt.mae = score(sol.b);
            return std::move(sol.state);
        } catch (const Error& e) {
            pt.error = e.what();
            pt.converged = false;
            return std::nullopt;
        }
    };

    if (popts.warm_start || popts.threads <= 1) {
        std::optional<SolverState> held;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto next = solve_one(i, (popts.warm_start && held) ? &*held : nullptr);
            if (next) held = std::move(next);
        }
    } else {
        std::atomic<std::size_t> cursor{0};
        const int nthreads = std::min<int>(popts.threads, static_cast<int>(grid.size()));
        std::vector<std::thread> pool;
        for (int k = 0; k < nthreads; ++k) {
            pool.emplace_back([&]() {
                for (std::size_t i = cursor++; i < grid.size(); i = cursor++) solve_one(i, nullptr);
            });
        }
        for (auto& th : pool) th.join();
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        const double m = res.points[i].mae;
        if (std::isfinite(m) && m < best) {
            best = m;
            res.argmin = static_cast<int>(i);
        }
    }
    return res;
}

}  // namespace pme
