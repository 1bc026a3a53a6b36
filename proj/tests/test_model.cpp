#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pme/model.hpp"
#include "pme/stacked.hpp"

using namespace pme;

namespace {

struct Data {
    Matrix X;
    Vector y;
};

Data make_data(int n, int p, std::uint64_t seed) {
    CounterRng rng(seed, 1);
    Data d{oracle::random_normal(rng, n, p), Vector(n)};
    for (int i = 0; i < n; ++i) d.y[i] = rng.normal();
    return d;
}

ModelParams params(std::initializer_list<std::pair<const std::string, double>> kv) {
    ModelParams mp;
    mp.values = kv;
    return mp;
}

}  // namespace

TEST(BuildModel, LassoExample) {
    const Data d = make_data(5, 3, 1);
    const ProblemSpec s = build_model("lasso", params({{"alpha1", 1.0}}), d.X, d.y);
    EXPECT_EQ(s.N(), 1);
    EXPECT_EQ(s.P(), 0);
    EXPECT_EQ(s.sigma_coupling.kind, CouplingKind::Pinned);
    EXPECT_EQ(s.sigma_coupling.value, 1.0);
    EXPECT_EQ(s.theta.kind, PenaltyKind::L1);
    EXPECT_EQ(s.theta.alpha1, 1.0);
    EXPECT_TRUE(validate_spec(s).empty());
}

TEST(BuildModel, HeteroscedasticScaledLassoExample) {
    const Data d = make_data(18, 3, 2);
    ModelParams mp = params({{"alpha1", 1.0}, {"q", 2.0}});
    mp.groups = {{0, 1, 2, 3, 4, 5, 6, 7, 8}, {9, 10, 11, 12, 13, 14, 15, 16, 17}};
    const ProblemSpec s = build_model("het_scaled_lasso", mp, d.X, d.y);
    ASSERT_EQ(s.N(), 2);
    for (const auto& b : s.data) {
        EXPECT_EQ(b.atom.kind, AtomKind::ScaledLasso);
        EXPECT_EQ(b.atom.alpha, 0.5);
        EXPECT_EQ(b.atom.kappa, 1.0);
        EXPECT_EQ(b.X.rows(), 9);
    }
    // the atom is |x|^2 + 1/2
    const Vector r{{0.3, -0.4}};
    EXPECT_NEAR(eval_perspective(s.data[0].atom, 1.0, r), r.squaredNorm() + 0.5, 1e-14);
}

TEST(BuildModel, OwenExample) {
    const Data d = make_data(6, 4, 3);
    const ProblemSpec s = build_model("owen", params({{"rho1", 1.345}, {"rho2", 1.0}, {"alpha1", 0.5}}), d.X, d.y);
    ASSERT_EQ(s.N(), 6);
    ASSERT_EQ(s.P(), 4);
    for (const auto& b : s.data) {
        EXPECT_EQ(b.atom.kind, AtomKind::Huber);
        EXPECT_EQ(b.atom.alpha, 6.0);
        EXPECT_EQ(b.atom.rho, 1.345);
    }
    for (const auto& b : s.penalties) {
        EXPECT_EQ(b.atom.kind, AtomKind::BerhuStd);
        EXPECT_EQ(b.atom.alpha, 4.0);
        EXPECT_EQ(b.atom.weight, 0.5);
    }
    EXPECT_EQ(s.sigma_coupling.kind, CouplingKind::GroupAverage);
    EXPECT_EQ(s.tau_coupling.kind, CouplingKind::GroupAverage);
}

TEST(BuildModel, Errors) {
    const Data d = make_data(6, 3, 4);
    EXPECT_THROW(build_model("no_such_model", {}, d.X, d.y), UnknownModelError);
    EXPECT_THROW(build_model("lasso", {}, d.X, d.y), MissingParamError);
    EXPECT_THROW(build_model("lasso", params({{"alpha1", 1.0}, {"alpah2", 1.0}}), d.X, d.y), ParameterError);
    ModelParams mp = params({{"alpha1", 1.0}});
    mp.groups = {{0, 1, 2}, {2, 3, 4, 5}};
    EXPECT_THROW(build_model("het_scaled_lasso", mp, d.X, d.y), PartitionError);
    mp.groups = {{0, 1, 2}, {3, 4}};
    EXPECT_THROW(build_model("het_huber", mp, d.X, d.y), PartitionError);
    EXPECT_THROW(build_model("lasso", params({{"alpha1", 1.0}}), d.X, Vector::Zero(5)), DimensionError);
    EXPECT_THROW(build_model("lasso", params({{"alpha1", -1.0}}), d.X, d.y), ParameterError);
}

TEST(BuildModel, EveryCatalogModelBuildsAValidSpec) {
    const Data d = make_data(8, 4, 5);
    for (const auto& info : model_catalog()) {
        ModelParams mp;
        for (const auto& k : info.required) mp.values[k] = (k == "r") ? 1.5 : 0.7;
        const ProblemSpec s = build_model(info.name, mp, d.X, d.y);
        EXPECT_TRUE(validate_spec(s).empty()) << info.name;
        EXPECT_NO_THROW(assemble_stacked(s)) << info.name;
    }
}

TEST(ValidateSpec, Diagnostics) {
    const Data d = make_data(5, 3, 6);
    ProblemSpec s = build_model("lasso", params({{"alpha1", 1.0}}), d.X, d.y);
    EXPECT_TRUE(validate_spec(s).empty());
    ProblemSpec bad_rows = s;
    bad_rows.data[0].y = Vector::Zero(4);
    EXPECT_EQ(validate_spec(bad_rows).size(), 1u);
    ProblemSpec bad_alpha = s;
    bad_alpha.theta.alpha1 = -1.0;
    EXPECT_EQ(validate_spec(bad_alpha).size(), 1u);
    EXPECT_THROW(assemble_stacked(bad_rows), DimensionError);
}

TEST(AssembleStacked, LassoIsTheDesign) {
    const Data d = make_data(5, 3, 7);
    const StackedProblem sp = assemble_stacked(build_model("lasso", params({{"alpha1", 1.0}}), d.X, d.y));
    EXPECT_EQ(sp.A, d.X);
    EXPECT_EQ(sp.w, d.y);
    Matrix G = d.X * d.X.transpose();
    G.diagonal().array() += 1.0;
    const Matrix L = sp.gram.lower();
    EXPECT_LE((L * L.transpose() - G).norm() / G.norm(), 1e-12);
}

TEST(AssembleStacked, FusedLassoDifferenceRows) {
    const Data d = make_data(4, 3, 8);
    const ProblemSpec s = build_model("fused_lasso", params({{"alpha1", 1.0}, {"alpha2", 0.5}}), d.X, d.y);
    const StackedProblem sp = assemble_stacked(s);
    ASSERT_EQ(sp.A.rows(), 6);
    EXPECT_EQ(Vector(sp.A.row(4)), (Vector{{-1.0, 1.0, 0.0}}));
    EXPECT_EQ(Vector(sp.A.row(5)), (Vector{{0.0, -1.0, 1.0}}));
    EXPECT_TRUE(sp.w.tail(2).isZero());
}

TEST(AssembleStacked, IdentityFactor) {
    const GramFactor f = factorize_gram(Matrix::Identity(2, 2));
    EXPECT_LE((f.lower() - std::sqrt(2.0) * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(AssembleStacked, RowOrderRoundTrip) {
    const Data d = make_data(7, 5, 9);
    ModelParams mp = params({{"alpha1", 0.3}, {"alpha2", 0.4}});
    const ProblemSpec s = build_model("het_huber", mp, d.X, d.y);
    const StackedProblem sp = assemble_stacked(s);
    CounterRng rng(10, 1);
    const Vector b = oracle::random_vec(rng, 5);
    const Vector Ab = sp.A * b;
    for (const auto& blk : sp.blocks) {
        const Vector expected = blk.is_data ? Vector(s.data[static_cast<std::size_t>(blk.index)].X * b)
                                            : s.penalties[static_cast<std::size_t>(blk.index)].L.apply(b);
        EXPECT_EQ(Vector(Ab.segment(blk.offset, blk.rows)), expected);
        EXPECT_EQ(&sp.block_of_row(blk.offset), &blk);
    }
}

TEST(Objective, LassoReconstruction) {
    const Data d = make_data(9, 4, 11);
    const ProblemSpec s = build_model("lasso", params({{"alpha1", 0.8}}), d.X, d.y);
    CounterRng rng(12, 1);
    for (int k = 0; k < 50; ++k) {
        const Vector b = oracle::random_vec(rng, 4, -2.0, 2.0);
        const double ref = (d.X * b - d.y).squaredNorm() + 0.8 * b.lpNorm<1>();
        EXPECT_NEAR(evaluate_objective(s, Vector::Ones(1), Vector::Zero(0), b), ref, 1e-10 * (1.0 + ref));
    }
}

TEST(Objective, ScaledLassoMatchesConcomitantForm) {
    // s n/2 + |Xb - y|^2/(2 s) + alpha |b|_1
    const Data d = make_data(9, 4, 13);
    const ProblemSpec s = build_model("scaled_lasso", params({{"alpha1", 0.8}}), d.X, d.y);
    CounterRng rng(14, 1);
    const Vector b = oracle::random_vec(rng, 4);
    const double sig = 0.7;
    const double ref = sig * 9.0 / 2.0 + (d.X * b - d.y).squaredNorm() / (2.0 * sig) + 0.8 * b.lpNorm<1>();
    EXPECT_NEAR(evaluate_objective(s, Vector::Constant(1, sig), Vector::Zero(0), b), ref, 1e-12 * ref);
}

TEST(Objective, PerSampleScale) {
    const Data d = make_data(4, 2, 15);
    ModelParams mp = params({{"alpha1", 1.0}});
    mp.groups = {{0, 3}, {1, 2}};
    const ProblemSpec s = build_model("het_scaled_lasso", mp, d.X, d.y);
    EXPECT_EQ(per_sample_scale(s, Vector{{2.0, 5.0}}), (Vector{{2.0, 5.0, 5.0, 2.0}}));
}
