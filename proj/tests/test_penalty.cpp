#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pme/errors.hpp"
#include "pme/penalty.hpp"

using pme::SeparablePenalty;
using pme::Vector;
using pme::prox_separable_penalty;

TEST(PenaltyProx, SoftThresholdExample) {
    const Vector out = prox_separable_penalty(SeparablePenalty::l1(1.0), 1.0, Vector{{2.0, -0.5}});
    EXPECT_DOUBLE_EQ(out[0], 1.0);
    EXPECT_DOUBLE_EQ(out[1], 0.0);
}

TEST(PenaltyProx, SquaredNormExample) {
    const Vector out = prox_separable_penalty(SeparablePenalty::sq_l2(1.0), 1.0, Vector{{3.0, 0.0}});
    EXPECT_DOUBLE_EQ(out[0], 1.0);
    EXPECT_DOUBLE_EQ(out[1], 0.0);
}

TEST(PenaltyProx, PowerExampleMatchesStationarityAndGridOracle) {
    // y + 1.5 sqrt(y) = 2
    const Vector out = prox_separable_penalty(SeparablePenalty::power_r(0.0, 1.0, 1.5), 1.0, Vector{{2.0}});
    const double y = out[0];
    EXPECT_LT(std::abs(y + 1.5 * std::sqrt(y) - 2.0), 1e-10);
    const double ref = oracle::grid_refine_min(
        [](double t) { return std::pow(std::abs(t), 1.5) + 0.5 * (t - 2.0) * (t - 2.0); }, 0.0, 2.0);
    // an objective scan locates the minimizer to about sqrt(machine eps)
    EXPECT_NEAR(y, ref, 1e-7);
    // closed form through u = sqrt(y): u^2 + 1.5 u - 2 = 0
    const double u = (-1.5 + std::sqrt(2.25 + 8.0)) / 2.0;
    EXPECT_NEAR(y, u * u, 1e-12);
}

TEST(PenaltyProx, PowerRejectsExponentBelowOne) {
    EXPECT_THROW(prox_separable_penalty(SeparablePenalty::power_r(0.0, 1.0, 0.5), 1.0, Vector{{1.0}}),
                 pme::DomainError);
    EXPECT_THROW(prox_separable_penalty(SeparablePenalty::l1(1.0), 0.0, Vector{{1.0}}), pme::DomainError);
}

TEST(PenaltyProx, LinearShiftAddsThenThresholds) {
    const auto pen = SeparablePenalty::l1_linear_shift(1.0, Vector{{0.5, -2.0}});
    const Vector out = prox_separable_penalty(pen, 2.0, Vector{{0.0, 1.0}});
    EXPECT_DOUBLE_EQ(out[0], 0.0);   // 0 + 1 = 1, threshold 2
    EXPECT_DOUBLE_EQ(out[1], -1.0);  // 1 - 4 = -3, threshold 2
}

TEST(PenaltyProx, BlockShrink) {
    const Vector out = prox_separable_penalty(SeparablePenalty::l2_norm(1.0), 1.0, Vector{{3.0, 4.0}});
    EXPECT_NEAR(out[0], 2.4, 1e-15);
    EXPECT_NEAR(out[1], 3.2, 1e-15);
    EXPECT_TRUE(prox_separable_penalty(SeparablePenalty::l2_norm(6.0), 1.0, Vector{{3.0, 4.0}}).isZero());
}

namespace {

std::vector<SeparablePenalty> sample_penalties(int p) {
    return {SeparablePenalty::l1(0.7),
            SeparablePenalty::weighted_l1(0.5, Vector::LinSpaced(p, 0.0, 2.0)),
            SeparablePenalty::sq_l2(0.8),
            SeparablePenalty::l2_norm(1.3),
            SeparablePenalty::elastic_net(0.4, 0.6),
            SeparablePenalty::power_r(0.3, 0.9, 1.3),
            SeparablePenalty::power_r(0.0, 1.1, 1.5),
            SeparablePenalty::l1_linear_shift(0.5, Vector::LinSpaced(p, -1.0, 1.0)),
            SeparablePenalty::l1_plus_l2_norm(0.4, 0.9)};
}

}  // namespace

TEST(PenaltyProx, OptimalityAgainstPerturbations) {
    // the prox output minimizes pen(y) + |x - y|^2 / (2 gamma)
    pme::CounterRng rng(21, 1);
    const int p = 4;
    for (const auto& pen : sample_penalties(p)) {
        for (int k = 0; k < 50; ++k) {
            const double gamma = 0.3 + 2.0 * rng.uniform();
            const Vector x = oracle::random_vec(rng, p, -3.0, 3.0);
            const Vector y = prox_separable_penalty(pen, gamma, x);
            const double f0 = pme::eval_penalty(pen, y) + (x - y).squaredNorm() / (2.0 * gamma);
            for (int d = 0; d < 40; ++d) {
                const Vector z = y + 1e-3 * oracle::random_vec(rng, p);
                const double f1 = pme::eval_penalty(pen, z) + (x - z).squaredNorm() / (2.0 * gamma);
                EXPECT_GE(f1, f0 - 1e-12) << pme::to_string(pen.kind);
            }
        }
    }
}

TEST(PenaltyProx, FirmlyNonexpansive) {
    pme::CounterRng rng(22, 1);
    const int p = 5;
    for (const auto& pen : sample_penalties(p)) {
        for (int k = 0; k < 200; ++k) {
            const Vector u = oracle::random_vec(rng, p, -3.0, 3.0);
            const Vector v = oracle::random_vec(rng, p, -3.0, 3.0);
            const Vector pu = prox_separable_penalty(pen, 1.0, u);
            const Vector pv = prox_separable_penalty(pen, 1.0, v);
            EXPECT_LE((pu - pv).squaredNorm(), (pu - pv).dot(u - v) + 1e-10) << pme::to_string(pen.kind);
        }
    }
}

TEST(PenaltyProx, ApproachesIdentityAsGammaVanishes) {
    pme::CounterRng rng(23, 1);
    const int p = 4;
    const Vector x = oracle::random_vec(rng, p, -2.0, 2.0);
    for (const auto& pen : sample_penalties(p)) {
        // subgradient magnitude on the box [-3, 3]^p is below 20 for these penalties
        for (double g : {1e-2, 1e-4, 1e-6}) {
            const Vector y = prox_separable_penalty(pen, g, x);
            EXPECT_LE((y - x).norm(), g * 20.0) << pme::to_string(pen.kind);
        }
    }
}

TEST(PenaltyValidate, Diagnostics) {
    EXPECT_TRUE(pme::validate(SeparablePenalty::l1(1.0), 3).empty());
    EXPECT_EQ(pme::validate(SeparablePenalty::l1(-1.0), 3).size(), 1u);
    EXPECT_EQ(pme::validate(SeparablePenalty::power_r(0.0, 1.0, 2.5), 3).size(), 1u);
    EXPECT_EQ(pme::validate(SeparablePenalty::weighted_l1(1.0, Vector{{1.0, -1.0, 0.0}}), 3).size(), 1u);
}
