#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/penalty.hpp"
#include "pme/rng.hpp"

namespace pme {

enum class DesignKind { IidNormal, Equicorrelated };

/// Mean-shift heteroscedastic data model y = X b + o + C e with C diagonal.
struct SyntheticSpec {
    int n = 0;
    int p = 0;
    DesignKind design = DesignKind::IidNormal;
    double corr = 0.0;
    std::vector<std::vector<int>> groups;  // 0-based, tiles {0..n-1}
    std::vector<double> sigma_bar;         // one noise level per group
    double outlier_fraction = 0.0;
    double outlier_scale = 5.0;            // standard deviation of the nonzero shifts
    std::vector<double> b_true;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    Matrix X;
    Vector y;
    Vector b_true;
    Vector o_true;
    Vector s_true;        // per group
    Vector sample_scale;  // per sample diagonal of C
};

// independent streams per component
inline constexpr std::uint64_t kStreamDesign = 1;
inline constexpr std::uint64_t kStreamNoise = 2;
inline constexpr std::uint64_t kStreamOutlierIndex = 3;
inline constexpr std::uint64_t kStreamOutlierValue = 4;

inline std::vector<std::string> validate(const SyntheticSpec& s) {
    std::vector<std::string> out;
    if (s.n <= 0 || s.p <= 0) out.push_back("n and p must be positive");
    if (s.design == DesignKind::Equicorrelated && !(s.corr >= 0.0 && s.corr < 1.0))
        out.push_back("equicorrelation must lie in [0, 1[");
    if (s.groups.size() != s.sigma_bar.size()) out.push_back("one sigma_bar value is needed per group");
    for (double v : s.sigma_bar)
        if (!(v >= 0.0)) out.push_back("sigma_bar values must be >= 0");
    if (!(s.outlier_fraction >= 0.0 && s.outlier_fraction <= 1.0)) out.push_back("outlier_fraction must lie in [0, 1]");
    if (!(s.outlier_scale >= 0.0)) out.push_back("outlier_scale must be >= 0");
    if (static_cast<int>(s.b_true.size()) != s.p) out.push_back("b_true length differs from p");
    if (s.n > 0) {
        std::vector<int> seen(static_cast<std::size_t>(s.n), 0);
        for (const auto& g : s.groups)
            for (int i : g) {
                if (i < 0 || i >= s.n) {
                    out.push_back("group index out of range");
                } else {
                    ++seen[static_cast<std::size_t>(i)];
                }
            }
        for (int k : seen)
            if (k != 1) {
                out.push_back("groups must tile the sample indices exactly once");
                break;
            }
    }
    return out;
}

inline SyntheticData gen_synthetic(const SyntheticSpec& spec) {
    const auto issues = validate(spec);
    if (!issues.empty()) throw ParameterError("synthetic spec: " + issues.front());
    const int n = spec.n, p = spec.p;

    SyntheticData d;
    d.X.resize(n, p);
    CounterRng design(spec.seed, kStreamDesign);
    const double a = std::sqrt(1.0 - (spec.design == DesignKind::Equicorrelated ? spec.corr : 0.0));
    const double c = (spec.design == DesignKind::Equicorrelated) ? std::sqrt(spec.corr) : 0.0;
    for (int i = 0; i < n; ++i) {
        // row-major draw order: p entries then the shared factor
        for (int j = 0; j < p; ++j) d.X(i, j) = design.normal();
        if (spec.design == DesignKind::Equicorrelated) {
            const double common = design.normal();
            for (int j = 0; j < p; ++j) d.X(i, j) = a * d.X(i, j) + c * common;
        }
    }

    d.b_true = Eigen::Map<const Vector>(spec.b_true.data(), p);
    d.s_true = Eigen::Map<const Vector>(spec.sigma_bar.data(), static_cast<Eigen::Index>(spec.sigma_bar.size()));
    d.sample_scale = Vector::Zero(n);
    for (std::size_t g = 0; g < spec.groups.size(); ++g)
        for (int i : spec.groups[g]) d.sample_scale[i] = spec.sigma_bar[g];

    d.o_true = Vector::Zero(n);
    const int n_out = static_cast<int>(std::ceil(spec.outlier_fraction * n - 1e-12));
    if (n_out > 0) {
        CounterRng pick(spec.seed, kStreamOutlierIndex);
        CounterRng value(spec.seed, kStreamOutlierValue);
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (int k = 0; k < n_out; ++k) {
            // partial Fisher-Yates
            const int span = n - k;
            int j = k + static_cast<int>(pick.uniform() * span);
            if (j >= n) j = n - 1;
            std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
            d.o_true[idx[static_cast<std::size_t>(k)]] = spec.outlier_scale * value.normal();
        }
    }

    CounterRng noise(spec.seed, kStreamNoise);
    Vector e(n);
    for (int i = 0; i < n; ++i) e[i] = noise.normal();
    d.y = d.X * d.b_true + d.o_true + d.sample_scale.cwiseProduct(e);
    return d;
}

/// Contiguous groups of the given sizes.
inline std::vector<std::vector<int>> contiguous_groups(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> g;
    int start = 0;
    for (int s : sizes) {
        std::vector<int> grp(static_cast<std::size_t>(s));
        std::iota(grp.begin(), grp.end(), start);
        g.push_back(std::move(grp));
        start += s;
    }
    return g;
}

/// Low-dimensional setting: n = 18, p = 3, first half noisy (3), second half noise-free.
inline SyntheticSpec preset_lowdim(std::uint64_t seed) {
    SyntheticSpec s;
    s.n = 18;
    s.p = 3;
    s.groups = contiguous_groups({9, 9});
    s.sigma_bar = {3.0, 0.0};
    s.b_true = {0.25, -0.25, 0.0};
    s.seed = seed;
    return s;
}

/// Correlated design with outliers: n = 75, p = 64, three noise groups, 8 shifts.
inline SyntheticSpec preset_correlated(std::uint64_t seed) {
    SyntheticSpec s;
    s.n = 75;
    s.p = 64;
    s.design = DesignKind::Equicorrelated;
    s.corr = 0.3;
    s.groups = contiguous_groups({25, 25, 25});
    s.sigma_bar = {5.0, 0.5, 0.05};
    s.outlier_fraction = 0.1;
    s.outlier_scale = 5.0;
    s.b_true.assign(64, 0.0);
    for (int i : {0, 2, 4}) s.b_true[static_cast<std::size_t>(i)] = -1.0;
    for (int i : {1, 3, 5}) s.b_true[static_cast<std::size_t>(i)] = 1.0;
    s.seed = seed;
    return s;
}

inline SyntheticSpec synthetic_preset(const std::string& name, std::uint64_t seed) {
    if (name == "lowdim") return preset_lowdim(seed);
    if (name == "correlated") return preset_correlated(seed);
    throw ParameterError("unknown synthetic preset '" + name + "'");
}

}  // namespace pme
