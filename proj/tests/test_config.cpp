#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "pme/config.hpp"

using namespace pme;

namespace {

RunConfig parse(const char* text) { return parse_config_json(Json::parse(text)); }

}  // namespace

TEST(Config, MinimalLassoFillsSolverDefaults) {
    const RunConfig c = parse(R"({"model": "lasso", "params": {"alpha1": 0.5}, "data": {"X": "X.csv", "y": "y.csv"}})");
    EXPECT_EQ(c.model, "lasso");
    EXPECT_EQ(c.params.get("alpha1"), 0.5);
    EXPECT_EQ(c.solver.gamma, 1.0);
    EXPECT_EQ(c.solver.mu, 1.9);
    EXPECT_EQ(c.solver.eps_tol, 1e-4);
    EXPECT_EQ(c.solver.max_iter, 100000);
    ASSERT_TRUE(c.data.has_value());
    EXPECT_FALSE(c.data->is_table());
    EXPECT_FALSE(c.synthetic.has_value());
    EXPECT_EQ(c.threads, 1);
}

TEST(Config, DataAndSyntheticTogetherIsRejected) {
    EXPECT_THROW(parse(R"({"model": "lasso", "data": {"X": "a", "y": "b"}, "synthetic": {"preset": "lowdim"}})"),
                 SchemaError);
}

TEST(Config, RelaxationOutOfRangeIsRejected) {
    EXPECT_THROW(parse(R"({"model": "lasso", "solver": {"mu": 2.5}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "solver": {"gamma": 0}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "solver": {"eps_tol": -1}})"), SchemaError);
}

TEST(Config, UnknownKeysAreListed) {
    try {
        parse(R"({"model": "lasso", "params": {"alpha1": 1, "aplha2": 2, "rho": 1}})");
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("aplha2"), std::string::npos);
        EXPECT_NE(msg.find("rho"), std::string::npos);
    }
    EXPECT_THROW(parse(R"({"model": "lasso", "sovler": {}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "solver": {"tol": 1}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "path": {"alpha_min": 1, "alpha_max": 2, "num": 3, "steps": 1}})"),
                 SchemaError);
}

TEST(Config, TypeAndStructureErrors) {
    EXPECT_THROW(parse(R"({"params": {"alpha1": 1}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "no_such"})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "params": {"alpha1": "big"}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "groups": [[0, 1]]})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "data": {"X": "a"}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "data": {"X": "a", "y": "b", "table": "c"}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "synthetic": {"preset": "highdim"}})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "threads": 0})"), SchemaError);
    EXPECT_THROW(parse(R"({"model": "lasso", "path": {"alpha_min": 2, "alpha_max": 1, "num": 3}})"), SchemaError);
}

TEST(Config, TableDataDefaultsResponseColumn) {
    const RunConfig c = parse(R"({"model": "het_huber", "params": {"alpha1": 1}, "data": {"table": "t.csv"}})");
    ASSERT_TRUE(c.data && c.data->is_table());
    EXPECT_EQ(c.data->response_column, "y");
}

TEST(Config, SyntheticPresetAndExplicitSpec) {
    const RunConfig a = parse(R"({"model": "het_scaled_lasso", "seed": 9, "synthetic": {"preset": "lowdim"}})");
    ASSERT_TRUE(a.synthetic.has_value());
    EXPECT_EQ(a.synthetic->n, 18);
    EXPECT_EQ(a.synthetic->seed, 9u);
    const RunConfig b = parse(R"({"model": "lasso", "synthetic": {
        "n": 4, "p": 2, "design": "equicorrelated", "corr": 0.5, "groups": [[0, 1], [2, 3]],
        "sigma_bar": [1, 0], "b_true": [1, -1], "seed": 3}})");
    EXPECT_EQ(b.synthetic->design, DesignKind::Equicorrelated);
    EXPECT_EQ(b.synthetic->groups.size(), 2u);
    EXPECT_THROW(parse(R"({"model": "lasso", "synthetic": {"n": 4, "p": 2, "sigma_bar": [1], "b_true": [1]}})"),
                 SchemaError);
}

TEST(Config, EchoIncludesResolvedDefaults) {
    const RunConfig c = parse(R"({"model": "het_scaled_lasso", "params": {"alpha1": 1},
        "groups": [[0, 1], [2]], "synthetic": {"preset": "lowdim", "seed": 4},
        "path": {"alpha_min": 0.1, "alpha_max": 1, "num": 4}})");
    const Json j = to_json(c);
    EXPECT_EQ(j["solver"]["mu"], 1.9);
    EXPECT_EQ(j["solver"]["gamma"], 1.0);
    EXPECT_EQ(j["solver"]["eps_tol"], 1e-4);
    EXPECT_EQ(j["path"]["key"], "alpha1");
    EXPECT_EQ(j["path"]["log_grid"], true);
    EXPECT_EQ(j["synthetic"]["seed"], 4);
    // the echo is itself a valid config
    const RunConfig again = parse_config_json(j);
    EXPECT_EQ(to_json(again), j);
}

TEST(Config, FileErrors) {
    EXPECT_THROW(parse_config("/nonexistent/config.json"), IoError);
    const auto p = std::filesystem::temp_directory_path() / "pme_bad_config.json";
    std::ofstream(p) << "{ \"model\": ";
    EXPECT_THROW(parse_config(p.string()), SchemaError);
    std::filesystem::remove(p);
}

TEST(Config, ShippedConfigsParse) {
    for (const char* name : {"lowdim.json", "lowdim_smoothed.json", "correlated_het_huber.json",
                             "correlated_scaled_lasso.json", "riboflavin_huber.json"}) {
        EXPECT_NO_THROW(parse_config(std::string(PME_CONFIG_DIR) + "/" + name)) << name;
    }
}
