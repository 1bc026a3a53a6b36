// Command-line driver: synthetic data generation, single solves, regularization
// paths and the perspective-prox self-test.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "pme/pme.hpp"

namespace fs = std::filesystem;
using namespace pme;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

struct Dataset {
    Matrix X;
    Vector y;
    std::optional<SyntheticData> truth;
};

int resolve_threads(const CommonFlags& f, int from_config) {
    if (f.threads) return *f.threads;
    if (const char* env = std::getenv("PM_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
        }
        throw SchemaError(std::string("PM_THREADS must be a positive integer, got '") + env + "'");
    }
    return from_config;
}

RunConfig load_config(const CommonFlags& f) {
    RunConfig c = parse_config(f.config);
    if (f.seed) {
        c.seed = *f.seed;
        if (c.synthetic) c.synthetic->seed = *f.seed;
    }
    c.threads = resolve_threads(f, c.threads);
    if (c.threads < 1) throw SchemaError("--threads must be >= 1");
    if (!f.out.empty()) c.output = f.out;
    return c;
}

Dataset load_data(const RunConfig& c) {
    Dataset d;
    if (c.synthetic) {
        SyntheticData s = gen_synthetic(*c.synthetic);
        d.X = s.X;
        d.y = s.y;
        d.truth = std::move(s);
    } else if (c.data && c.data->is_table()) {
        std::tie(d.X, d.y) = load_design_table(c.data->table_path, c.data->response_column);
    } else if (c.data) {
        d.X = load_matrix_csv(c.data->X_path);
        d.y = load_vector_csv(c.data->y_path);
    } else {
        throw SchemaError("config needs a 'data' or 'synthetic' section");
    }
    return d;
}

Json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

void ensure_parent(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

bool is_huber_model(const std::string& m) { return m == "het_huber" || m == "owen"; }

// --- gen -------------------------------------------------------------------

int run_gen(const CommonFlags& f, const std::string& preset) {
    RunConfig c;
    if (!f.config.empty()) {
        c = load_config(f);
    } else {
        if (preset.empty()) throw SchemaError("gen needs --config or --preset");
        c.model = "lasso";
        c.synthetic_preset = preset;
        c.seed = f.seed.value_or(0);
        c.synthetic = synthetic_preset(preset, c.seed);
        if (!f.out.empty()) c.output = f.out;
    }
    if (!c.synthetic) throw SchemaError("gen needs a 'synthetic' section in the config");
    const std::string dir = c.output.empty() ? "." : c.output;
    fs::create_directories(dir);
    const SyntheticData d = gen_synthetic(*c.synthetic);
    save_matrix_csv(dir + "/X.csv", d.X);
    save_vector_csv(dir + "/y.csv", d.y, "y");
    save_vector_csv(dir + "/b_true.csv", d.b_true, "b");
    save_vector_csv(dir + "/o_true.csv", d.o_true, "o");
    save_vector_csv(dir + "/sample_scale.csv", d.sample_scale, "scale");
    Json j;
    j["config"] = to_json(c);
    j["n"] = d.X.rows();
    j["p"] = d.X.cols();
    j["files"] = {"X.csv", "y.csv", "b_true.csv", "o_true.csv", "sample_scale.csv"};
    write_json(dir + "/gen.json", j);
    std::cout << "wrote " << d.X.rows() << "x" << d.X.cols() << " design to " << dir << "\n";
    return kExitOk;
}

// --- solve -----------------------------------------------------------------

int run_solve(const CommonFlags& f, std::optional<double> alpha1) {
    RunConfig c = load_config(f);
    if (alpha1) c.params.values[model_info(c.model).path_key] = *alpha1;
    const Dataset d = load_data(c);
    const ProblemSpec spec = build_model(c.model, c.params, d.X, d.y);
    const Solution sol = solve(spec, c.solver);

    Json j;
    j["config"] = to_json(c);
    j["b"] = vec_json(sol.b);
    j["s"] = vec_json(sol.s);
    j["t"] = vec_json(sol.t);
    j["objective"] = sol.objective;
    j["iterations"] = sol.iterations;
    j["converged"] = sol.converged;
    const Vector fit = d.X * sol.b;
    j["mae_y"] = mae(fit, d.y);
    if (d.truth) j["mae_truth"] = mae(fit, (d.X * d.truth->b_true).eval());
    if (is_huber_model(c.model)) {
        const double rho1 = c.params.get_or("rho1", kDefaultHuberRho);
        const OutlierEstimate o = extract_outliers((d.y - fit).eval(), rho1, per_sample_scale(spec, sol.s));
        j["outliers"] = {{"rho1", rho1}, {"flags", o.flags}, {"count", o.flags.size()}, {"o_hat", vec_json(o.o_hat)}};
    }
    const std::string out = c.output.empty() ? "solution.json" : c.output;
    ensure_parent(out);
    write_json(out, j);
    std::cout << "objective " << sol.objective << " after " << sol.iterations << " iterations"
              << (sol.converged ? "" : " (not converged)") << "; wrote " << out << "\n";
    return kExitOk;
}

// --- path ------------------------------------------------------------------

struct GridFlags {
    std::optional<double> lo, hi;
    std::optional<int> num;
    std::optional<bool> log_grid;
};

int run_path_cmd(const CommonFlags& f, const GridFlags& gf) {
    RunConfig c = load_config(f);
    GridSpec g = c.path.value_or(GridSpec{});
    if (gf.lo) g.alpha_min = *gf.lo;
    if (gf.hi) g.alpha_max = *gf.hi;
    if (gf.num) g.num = *gf.num;
    if (gf.log_grid) g.log_grid = *gf.log_grid;
    if (!(g.alpha_min > 0.0) || !(g.alpha_max >= g.alpha_min) || g.num < 1)
        throw SchemaError("path grid needs 0 < alpha_min <= alpha_max and num >= 1");
    c.path = g;

    const Dataset d = load_data(c);
    const std::vector<double> grid = make_grid(g.alpha_min, g.alpha_max, g.num, g.log_grid);
    PathOptions po;
    po.warm_start = g.warm_start;
    po.threads = c.threads;
    po.key = g.key;
    Vector ref;
    if (d.truth) {
        ref = d.X * d.truth->b_true;
        po.score = [&](const Vector& b) { return mae(d.X * b, ref); };
    }
    const PathResult res = run_path(c.model, c.params, d.X, d.y, grid, c.solver, po);

    const std::string out = c.output.empty() ? "path.csv" : c.output;
    ensure_parent(out);
    const Eigen::Index p = d.X.cols();
    Eigen::Index N = 0;
    for (const auto& pt : res.points) N = std::max(N, pt.s.size());
    std::vector<std::string> header{"alpha"};
    for (Eigen::Index j = 0; j < p; ++j) header.push_back("b_" + std::to_string(j + 1));
    for (Eigen::Index j = 0; j < N; ++j) header.push_back("s_" + std::to_string(j + 1));
    for (const char* h : {"t_mean", "objective", "mae", "converged", "iterations"}) header.emplace_back(h);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Matrix table = Matrix::Constant(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(header.size()), nan);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PathPoint& pt = res.points[i];
        const auto r = static_cast<Eigen::Index>(i);
        table(r, 0) = pt.alpha;
        if (pt.b.size() == p) table.row(r).segment(1, p) = pt.b.transpose();
        if (pt.s.size() == N) table.row(r).segment(1 + p, N) = pt.s.transpose();
        const Eigen::Index k = 1 + p + N;
        table(r, k) = pt.t.size() > 0 ? pt.t.mean() : 0.0;
        table(r, k + 1) = pt.objective;
        table(r, k + 2) = pt.mae;
        table(r, k + 3) = pt.converged ? 1.0 : 0.0;
        table(r, k + 4) = static_cast<double>(pt.iterations);
    }
    save_matrix_csv(out, table, header);

    Json j;
    j["config"] = to_json(c);
    j["key"] = res.key;
    j["rows"] = grid.size();
    j["argmin"] = res.argmin;
    if (res.argmin >= 0) {
        const PathPoint& best = res.points[static_cast<std::size_t>(res.argmin)];
        j["best"] = {{"alpha", best.alpha}, {"mae", best.mae}, {"nonzeros", res.nonzeros(static_cast<std::size_t>(res.argmin))}};
    }
    Json failures = Json::array();
    for (const auto& pt : res.points)
        if (!pt.error.empty()) failures.push_back({{"alpha", pt.alpha}, {"error", pt.error}});
    j["failures"] = failures;
    j["mae_reference"] = d.truth ? "X b_true" : "y";
    write_json(out + ".json", j);
    std::cout << "wrote " << grid.size() << " rows to " << out;
    if (!failures.empty()) std::cout << " (" << failures.size() << " failed grid points)";
    std::cout << "\n";
    return kExitOk;
}

// --- prox-selftest ---------------------------------------------------------

int run_selftest_cmd(int trials, double tol, std::optional<std::uint64_t> seed) {
    SelftestOptions o;
    o.trials = trials;
    o.tol = tol;
    if (seed) o.seed = *seed;
    const SelftestReport r = run_selftest(o);
    for (const auto& a : r.atoms) {
        std::printf("%-13s trials=%d prox_gap=%.3e identity_gap=%.3e root_residual=%.3e (%d roots) errors=%d%s%s\n",
                    a.name.c_str(), a.trials, a.max_prox_gap, a.max_identity_gap, a.max_root_residual,
                    a.root_samples, a.errors, a.first_error.empty() ? "" : " first: ", a.first_error.c_str());
    }
    std::printf("%s\n", r.ok() ? "selftest PASS" : "selftest FAIL");
    return r.ok() ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perspective M-estimation: proximal solvers for concomitant-scale regression"};
    app.require_subcommand(1);

    CommonFlags common;
    std::string preset;
    std::optional<double> alpha1;
    GridFlags grid;
    int trials = 500;
    double tol = 1e-6;

    auto add_common = [&](CLI::App* sc, bool need_config) {
        auto* opt = sc->add_option("--config", common.config, "JSON run configuration")->check(CLI::ExistingFile);
        if (need_config) opt->required();
        sc->add_option("--out", common.out, "output path");
        sc->add_option("--seed", common.seed, "random seed override");
        sc->add_option("--threads", common.threads, "worker threads (fallback: PM_THREADS)")->check(CLI::PositiveNumber);
    };

    auto* gen = app.add_subcommand("gen", "write synthetic data as CSV");
    add_common(gen, false);
    gen->add_option("--preset", preset, "lowdim or correlated")->check(CLI::IsMember({"lowdim", "correlated"}));

    auto* solve_cmd = app.add_subcommand("solve", "solve one model and write the solution as JSON");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--alpha1", alpha1, "value of the model's path parameter");

    auto* path = app.add_subcommand("path", "solve along a grid and write one CSV row per value");
    add_common(path, true);
    path->add_option("--alpha1-min", grid.lo, "smallest grid value");
    path->add_option("--alpha1-max", grid.hi, "largest grid value");
    path->add_option("--num", grid.num, "number of grid values")->check(CLI::PositiveNumber);
    path->add_flag("--log-grid,!--no-log-grid", grid.log_grid, "log-linear (default) or linear spacing");

    auto* st = app.add_subcommand("prox-selftest", "check closed-form proxes against the numeric projection");
    st->add_option("--trials", trials, "samples per atom")->check(CLI::PositiveNumber);
    st->add_option("--tol", tol, "componentwise tolerance")->check(CLI::PositiveNumber);
    st->add_option("--seed", common.seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return run_gen(common, preset);
        if (*solve_cmd) return run_solve(common, alpha1);
        if (*path) return run_path_cmd(common, grid);
        if (*st) return run_selftest_cmd(trials, tol, common.seed);
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
