#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pme/epigraph.hpp"
#include "pme/errors.hpp"

using pme::project_epi_region_2d;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double box_minus_one(double v) { return std::abs(v) <= 1.0 ? -1.0 : kInf; }
double half_square(double v) { return 0.5 * v * v; }
double zero_indicator(double v) { return v == 0.0 ? 0.0 : kInf; }

}  // namespace

TEST(EpiProjection, FeasiblePointIsFixed) {
    const auto [c, v] = project_epi_region_2d(box_minus_one, -5.0, 0.0);
    EXPECT_DOUBLE_EQ(c, -5.0);
    EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(EpiProjection, ParabolaExampleAgainstScan) {
    const auto [c, v] = project_epi_region_2d(half_square, 1.0, 0.0);
    EXPECT_NEAR(c, 0.0, 1e-8);
    EXPECT_NEAR(v, 0.0, 1e-8);
    const auto [oc, ov] = oracle::project_by_scan(half_square, 1.0, 0.0, -3.0, 3.0);
    EXPECT_NEAR(c, oc, 1e-7);
    EXPECT_NEAR(v, ov, 1e-7);
}

TEST(EpiProjection, PointIndicatorClipsToAxis) {
    const auto [c, v] = project_epi_region_2d(zero_indicator, 3.0, 4.0);
    EXPECT_NEAR(c, 0.0, 1e-8);
    EXPECT_NEAR(v, 0.0, 1e-8);
}

TEST(EpiProjection, EmptyRegionDetected) {
    EXPECT_THROW(project_epi_region_2d([](double) { return kInf; }, 1.0, 1.0), pme::EmptyRegionError);
}

TEST(EpiProjection, FeasibleAndNoFartherThanSampledPoints) {
    pme::CounterRng rng(41, 1);
    struct Case {
        double (*g)(double);
        double lo, hi;
    };
    auto quartic = [](double v) { return 0.25 * v * v * v * v - 0.5; };
    auto vapnik_like = [](double v) { return std::abs(v) <= 1.0 ? 0.5 * std::abs(v) - 1.0 : kInf; };
    auto huber_like = [](double v) { return std::abs(v) <= 0.8 ? 0.5 * v * v - 0.3 : kInf; };
    const Case cases[] = {{half_square, -4.0, 4.0}, {box_minus_one, -1.0, 1.0}, {+quartic, -3.0, 3.0},
                          {+vapnik_like, -1.0, 1.0}, {+huber_like, -0.8, 0.8}};
    for (const auto& cs : cases) {
        for (int k = 0; k < 40; ++k) {
            const double chi = -3.0 + 6.0 * rng.uniform();
            const double nu = -3.0 + 6.0 * rng.uniform();
            const auto [c, v] = project_epi_region_2d(cs.g, chi, nu);
            ASSERT_TRUE(std::isfinite(cs.g(v)));
            EXPECT_LE(c + cs.g(v), 1e-8);
            const double d = std::hypot(c - chi, v - nu);
            int closer = 0;
            for (int s = 0; s < 10000; ++s) {
                const double sv = cs.lo + (cs.hi - cs.lo) * rng.uniform();
                const double sc = -cs.g(sv) - 3.0 * rng.uniform() * rng.uniform();
                if (std::hypot(sc - chi, sv - nu) < d - 1e-9) ++closer;
            }
            EXPECT_EQ(closer, 0) << "chi=" << chi << " nu=" << nu;
        }
    }
}

TEST(ConjugateSetProjection, MatchesPlanarProjectionRadially) {
    // for radial sets the full-space projection lies on the ray of w
    pme::CounterRng rng(42, 1);
    for (int k = 0; k < 100; ++k) {
        const double mu = -2.0 + 4.0 * rng.uniform();
        Eigen::VectorXd w = oracle::random_vec(rng, 3, -2.0, 2.0);
        const auto [m, u] = pme::project_conjugate_set(half_square, mu, w);
        const auto [c, v] = project_epi_region_2d(half_square, mu, w.norm());
        EXPECT_NEAR(m, c, 1e-7);
        EXPECT_NEAR(u.norm(), v, 1e-7);
        EXPECT_NEAR(u.dot(w), u.norm() * w.norm(), 1e-7);
    }
}
