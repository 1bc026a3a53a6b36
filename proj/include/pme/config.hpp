#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pme/errors.hpp"
#include "pme/model.hpp"
#include "pme/solver.hpp"
#include "pme/synthetic.hpp"

namespace pme {

using Json = nlohmann::json;

/// Data read from CSV files: either separate X and y files, or one table
/// holding the features and a response column.
struct DataSource {
    std::string X_path;
    std::string y_path;
    std::string table_path;
    std::string response_column;
    bool is_table() const { return !table_path.empty(); }
};

struct GridSpec {
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    int num = 0;
    bool log_grid = true;
    bool warm_start = true;
    std::string key;  // swept parameter, model default when empty
};

struct RunConfig {
    std::string model;
    ModelParams params;
    SolverOptions solver;
    std::optional<DataSource> data;
    std::optional<SyntheticSpec> synthetic;
    std::string synthetic_preset;  // empty for an explicit spec
    std::optional<GridSpec> path;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string output;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be a JSON object");
    std::string bad;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) bad += (bad.empty() ? "" : ", ") + it.key();
    if (!bad.empty()) throw SchemaError("unknown keys in " + where + ": " + bad);
}

template <class T>
T get_as(const Json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(where + "." + key + " has the wrong type");
    }
}

template <class T>
void read_opt(const Json& obj, const char* key, T& out, const std::string& where) {
    if (obj.contains(key)) out = get_as<T>(obj, key, where);
}

inline std::vector<std::vector<int>> read_groups(const Json& j, const std::string& where) {
    auto g = [&] {
        try {
            return j.get<std::vector<std::vector<int>>>();
        } catch (const nlohmann::json::exception&) {
            throw SchemaError(where + " must be a list of integer lists");
        }
    }();
    return g;
}

inline SyntheticSpec read_synthetic(const Json& j, std::uint64_t seed, std::string& preset) {
    const std::string where = "synthetic";
    if (j.contains("preset")) {
        reject_unknown(j, {"preset", "seed"}, where);
        preset = get_as<std::string>(j, "preset", where);
        if (preset != "lowdim" && preset != "correlated") throw SchemaError("unknown synthetic preset '" + preset + "'");
        std::uint64_t s = seed;
        read_opt(j, "seed", s, where);
        return synthetic_preset(preset, s);
    }
    reject_unknown(j,
                   {"n", "p", "design", "corr", "groups", "sigma_bar", "outlier_fraction", "outlier_scale", "b_true",
                    "seed"},
                   where);
    SyntheticSpec s;
    s.n = get_as<int>(j, "n", where);
    s.p = get_as<int>(j, "p", where);
    const std::string design = j.contains("design") ? get_as<std::string>(j, "design", where) : "iid_normal";
    if (design == "iid_normal") {
        s.design = DesignKind::IidNormal;
    } else if (design == "equicorrelated") {
        s.design = DesignKind::Equicorrelated;
    } else {
        throw SchemaError("synthetic.design must be 'iid_normal' or 'equicorrelated'");
    }
    read_opt(j, "corr", s.corr, where);
    s.groups = j.contains("groups") ? read_groups(j.at("groups"), "synthetic.groups")
                                    : std::vector<std::vector<int>>{};
    if (s.groups.empty() && s.n > 0) s.groups = contiguous_groups({s.n});
    s.sigma_bar = get_as<std::vector<double>>(j, "sigma_bar", where);
    read_opt(j, "outlier_fraction", s.outlier_fraction, where);
    read_opt(j, "outlier_scale", s.outlier_scale, where);
    s.b_true = get_as<std::vector<double>>(j, "b_true", where);
    s.seed = seed;
    read_opt(j, "seed", s.seed, where);
    const auto issues = validate(s);
    if (!issues.empty()) throw SchemaError("synthetic: " + issues.front());
    return s;
}

}  // namespace detail

/// Validates a parsed JSON document against the run-config schema.
inline RunConfig parse_config_json(const Json& j) {
    detail::reject_unknown(j,
                           {"model", "params", "groups", "weights", "solver", "data", "synthetic", "path", "seed",
                            "threads", "output"},
                           "config");
    RunConfig c;
    if (!j.contains("model")) throw SchemaError("config.model is required");
    c.model = detail::get_as<std::string>(j, "model", "config");
    const ModelInfo* info = nullptr;
    try {
        info = &model_info(c.model);
    } catch (const UnknownModelError& e) {
        throw SchemaError(e.what());
    }

    if (j.contains("params")) {
        const Json& pj = j.at("params");
        if (!pj.is_object()) throw SchemaError("config.params must be an object");
        std::set<std::string> allowed(info->required.begin(), info->required.end());
        allowed.insert(info->optional.begin(), info->optional.end());
        detail::reject_unknown(pj, allowed, "params");
        for (auto it = pj.begin(); it != pj.end(); ++it) {
            if (!it.value().is_number()) throw SchemaError("params." + it.key() + " must be a number");
            c.params.values[it.key()] = it.value().get<double>();
        }
    }
    if (j.contains("groups")) {
        if (!info->uses_groups) throw SchemaError("model '" + c.model + "' takes no groups");
        c.params.groups = detail::read_groups(j.at("groups"), "config.groups");
    }
    if (j.contains("weights")) {
        if (!info->uses_weights) throw SchemaError("model '" + c.model + "' takes no weights");
        c.params.weights = detail::get_as<std::vector<double>>(j, "weights", "config");
    }

    if (j.contains("solver")) {
        const Json& sj = j.at("solver");
        detail::reject_unknown(sj, {"gamma", "mu", "eps_tol", "max_iter", "check_scales"}, "solver");
        detail::read_opt(sj, "gamma", c.solver.gamma, "solver");
        detail::read_opt(sj, "mu", c.solver.mu, "solver");
        detail::read_opt(sj, "eps_tol", c.solver.eps_tol, "solver");
        detail::read_opt(sj, "max_iter", c.solver.max_iter, "solver");
        detail::read_opt(sj, "check_scales", c.solver.check_scales, "solver");
    }
    const auto issues = validate(c.solver);
    if (!issues.empty()) throw SchemaError("solver: " + issues.front());

    detail::read_opt(j, "seed", c.seed, "config");
    detail::read_opt(j, "threads", c.threads, "config");
    if (c.threads < 1) throw SchemaError("config.threads must be >= 1");
    detail::read_opt(j, "output", c.output, "config");

    const bool has_data = j.contains("data");
    const bool has_syn = j.contains("synthetic");
    if (has_data && has_syn) throw SchemaError("config has both 'data' and 'synthetic'; give exactly one");
    if (has_data) {
        const Json& dj = j.at("data");
        detail::reject_unknown(dj, {"X", "y", "table", "response_column"}, "data");
        DataSource d;
        detail::read_opt(dj, "X", d.X_path, "data");
        detail::read_opt(dj, "y", d.y_path, "data");
        detail::read_opt(dj, "table", d.table_path, "data");
        detail::read_opt(dj, "response_column", d.response_column, "data");
        const bool pair = !d.X_path.empty() && !d.y_path.empty();
        const bool table = !d.table_path.empty();
        if (pair == table) throw SchemaError("data needs either {X, y} or {table, response_column}");
        if (table && d.response_column.empty()) d.response_column = "y";
        c.data = d;
    } else if (has_syn) {
        c.synthetic = detail::read_synthetic(j.at("synthetic"), c.seed, c.synthetic_preset);
    }

    if (j.contains("path")) {
        const Json& gj = j.at("path");
        detail::reject_unknown(gj, {"alpha_min", "alpha_max", "num", "log_grid", "warm_start", "key"}, "path");
        GridSpec g;
        g.alpha_min = detail::get_as<double>(gj, "alpha_min", "path");
        g.alpha_max = detail::get_as<double>(gj, "alpha_max", "path");
        g.num = detail::get_as<int>(gj, "num", "path");
        detail::read_opt(gj, "log_grid", g.log_grid, "path");
        detail::read_opt(gj, "warm_start", g.warm_start, "path");
        detail::read_opt(gj, "key", g.key, "path");
        if (!(g.alpha_min > 0.0) || !(g.alpha_max >= g.alpha_min) || g.num < 1)
            throw SchemaError("path needs 0 < alpha_min <= alpha_max and num >= 1");
        if (g.num > 1 && !(g.alpha_max > g.alpha_min)) throw SchemaError("path with num > 1 needs alpha_min < alpha_max");
        c.path = g;
    }
    return c;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config_json(j);
}

/// Fully resolved configuration, defaults included.
inline Json to_json(const RunConfig& c) {
    Json j;
    j["model"] = c.model;
    j["params"] = Json(c.params.values);
    if (!c.params.groups.empty()) j["groups"] = c.params.groups;
    if (!c.params.weights.empty()) j["weights"] = c.params.weights;
    j["solver"] = {{"gamma", c.solver.gamma},
                   {"mu", c.solver.mu},
                   {"eps_tol", c.solver.eps_tol},
                   {"max_iter", c.solver.max_iter},
                   {"check_scales", c.solver.check_scales}};
    if (c.data) {
        if (c.data->is_table())
            j["data"] = {{"table", c.data->table_path}, {"response_column", c.data->response_column}};
        else
            j["data"] = {{"X", c.data->X_path}, {"y", c.data->y_path}};
    }
    if (c.synthetic) {
        const SyntheticSpec& s = *c.synthetic;
        if (!c.synthetic_preset.empty()) {
            j["synthetic"] = {{"preset", c.synthetic_preset}, {"seed", s.seed}};
        } else {
            j["synthetic"] = {{"n", s.n},
                              {"p", s.p},
                              {"design", s.design == DesignKind::Equicorrelated ? "equicorrelated" : "iid_normal"},
                              {"corr", s.corr},
                              {"groups", s.groups},
                              {"sigma_bar", s.sigma_bar},
                              {"outlier_fraction", s.outlier_fraction},
                              {"outlier_scale", s.outlier_scale},
                              {"b_true", s.b_true},
                              {"seed", s.seed}};
        }
    }
    if (c.path) {
        j["path"] = {{"alpha_min", c.path->alpha_min}, {"alpha_max", c.path->alpha_max},
                     {"num", c.path->num},             {"log_grid", c.path->log_grid},
                     {"warm_start", c.path->warm_start}, {"key", c.path->key.empty() ? model_info(c.model).path_key : c.path->key}};
    }
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["output"] = c.output;
    return j;
}

}  // namespace pme
