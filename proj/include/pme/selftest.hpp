#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/epigraph.hpp"
#include "pme/perspective.hpp"
#include "pme/rng.hpp"

namespace pme {

/// Randomized agreement check of the closed-form perspective proxes.
///
/// Sampling ranges: sigma in [-2, 3], x in [-3, 3]^3, gamma in {0.5, 1, 2},
/// q in {1.5, 2, 3}; atom parameters as in sample_atom.
struct SelftestOptions {
    int trials = 500;
    double tol = 1e-6;
    double root_tol = 1e-10;
    std::uint64_t seed = 20240601;
    bool check_identity = true;
};

struct AtomReport {
    std::string name;
    int trials = 0;
    double max_prox_gap = 0.0;      // closed form vs planar projection
    double max_identity_gap = 0.0;  // prox + gamma proj_C(./gamma) vs input
    double max_root_residual = 0.0;
    int root_samples = 0;
    int errors = 0;
    std::string first_error;
};

struct SelftestReport {
    std::vector<AtomReport> atoms;
    double tol = 0.0;
    double root_tol = 0.0;

    bool prox_ok() const {
        return std::all_of(atoms.begin(), atoms.end(),
                           [&](const AtomReport& a) { return a.errors == 0 && a.max_prox_gap <= tol; });
    }
    bool identity_ok() const {
        return std::all_of(atoms.begin(), atoms.end(), [&](const AtomReport& a) { return a.max_identity_gap <= tol; });
    }
    bool roots_ok() const {
        return std::all_of(atoms.begin(), atoms.end(),
                           [&](const AtomReport& a) { return a.max_root_residual <= root_tol; });
    }
    bool ok() const { return prox_ok() && identity_ok() && roots_ok(); }
};

inline constexpr std::array<AtomKind, 5> kClosedFormAtoms = {AtomKind::ScaledLasso, AtomKind::Huber, AtomKind::Berhu,
                                                             AtomKind::BerhuStd, AtomKind::Vapnik};

namespace detail {

inline double draw(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

template <std::size_t K>
double pick(CounterRng& rng, const std::array<double, K>& v) {
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * K), K - 1);
    return v[i];
}

}  // namespace detail

/// Random atom of the given kind within the self-test parameter ranges.
inline PerspectiveAtom sample_atom(AtomKind kind, CounterRng& rng) {
    const double q = detail::pick(rng, std::array{1.5, 2.0, 3.0});
    switch (kind) {
        case AtomKind::ScaledLasso:
            return PerspectiveAtom::scaled_lasso(detail::draw(rng, 0.0, 2.0), detail::draw(rng, 0.5, 3.0), q);
        case AtomKind::Huber:
            return PerspectiveAtom::huber(detail::draw(rng, 0.1, 2.0), detail::draw(rng, 0.2, 2.0), q);
        case AtomKind::Berhu:
            return PerspectiveAtom::berhu(detail::draw(rng, 0.1, 2.0), detail::draw(rng, 0.2, 2.0),
                                          detail::draw(rng, 0.5, 3.0), q);
        case AtomKind::BerhuStd:
            return PerspectiveAtom::berhu_std(detail::draw(rng, 0.1, 2.0), detail::draw(rng, 0.2, 2.0));
        case AtomKind::Vapnik:
            return PerspectiveAtom::vapnik(detail::draw(rng, 0.1, 2.0), detail::draw(rng, 0.1, 2.0));
        default: break;
    }
    throw ParameterError("sample_atom: no closed form for " + to_string(kind));
}

/// Residual of the root equation behind a root-producing case, or NaN when
/// the case involves no root.
inline double root_residual(const PerspectiveAtom& a, double gamma, double sigma, double r, const RadialProx& rp) {
    if (!std::isfinite(rp.root) || rp.root == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double g = gamma * a.weight;
    switch (a.kind) {
        case AtomKind::ScaledLasso:
            if (rp.case_id != 2) break;
            return scaled_lasso_root_residual(g, a.alpha, detail::sl_rho(a), a.qstar, sigma, r, rp.root);
        case AtomKind::Huber:
            if (rp.case_id != 4) break;
            return scaled_lasso_root_residual(g, a.alpha, 1.0, a.qstar, sigma, r, rp.root);
        case AtomKind::Berhu:
            if (rp.case_id != 2) break;
            return berhu_root_residual(g, a.alpha, a.rho, a.kappa, a.qstar, sigma, r, rp.root);
        case AtomKind::BerhuStd:
            if (rp.case_id != 4) break;
            return berhu_std_root_residual(g, a.alpha, a.rho, sigma, r, rp.root);
        default: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline AtomReport selftest_atom(AtomKind kind, const SelftestOptions& opts) {
    AtomReport rep;
    rep.name = to_string(kind);
    CounterRng rng(opts.seed, 100 + static_cast<std::uint64_t>(kind));
    for (int k = 0; k < opts.trials; ++k) {
        const PerspectiveAtom a = sample_atom(kind, rng);
        const double gamma = detail::pick(rng, std::array{0.5, 1.0, 2.0});
        const double sigma = detail::draw(rng, -2.0, 3.0);
        Vector x(3);
        for (int i = 0; i < 3; ++i) x[i] = detail::draw(rng, -3.0, 3.0);
        ++rep.trials;
        try {
            const RadialProx closed = radial_prox(a, gamma, sigma, x.norm());
            const ProxResult pc = to_prox_result(closed, x);
            const ProxResult pg = prox_persp_radial_generic(a, gamma, sigma, x);
            double gap = std::abs(pc.sigma_out - pg.sigma_out);
            gap = std::max(gap, (pc.x_out - pg.x_out).lpNorm<Eigen::Infinity>());
            rep.max_prox_gap = std::max(rep.max_prox_gap, gap);

            const double res = root_residual(a, gamma, sigma, x.norm(), closed);
            if (std::isfinite(res)) {
                ++rep.root_samples;
                rep.max_root_residual = std::max(rep.max_root_residual, std::abs(res));
            }

            if (opts.check_identity) {
                auto g = [&a](long double v) { return conjugate_radial(a, v); };
                const auto [m, u] = project_conjugate_set(g, sigma / gamma, (x / gamma).eval());
                double id = std::abs(pc.sigma_out + gamma * m - sigma);
                id = std::max(id, (pc.x_out + gamma * u - x).lpNorm<Eigen::Infinity>());
                rep.max_identity_gap = std::max(rep.max_identity_gap, id);
            }
        } catch (const std::exception& e) {
            if (rep.errors++ == 0) rep.first_error = e.what();
        }
    }
    return rep;
}

inline SelftestReport run_selftest(const SelftestOptions& opts) {
    SelftestReport r;
    r.tol = opts.tol;
    r.root_tol = opts.root_tol;
    for (AtomKind k : kClosedFormAtoms) r.atoms.push_back(selftest_atom(k, opts));
    return r;
}

}  // namespace pme
