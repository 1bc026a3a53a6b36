#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/penalty.hpp"

namespace pme {

/// Mean absolute difference |u - v|_1 / len.
inline double mae(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw ShapeError("mae: vectors of different length");
    if (u.size() == 0) return 0.0;
    return (u - v).lpNorm<1>() / static_cast<double>(u.size());
}

struct OutlierEstimate {
    Vector o_hat;
    std::vector<int> flags;  // 0-based sample indices
};

/// Flags samples whose residual leaves the quadratic zone |r_i| <= rho1 * sigma_i and
/// returns the soft-thresholded excess as the shift estimate.
inline OutlierEstimate extract_outliers(const Vector& residuals, double rho1, const Vector& sigma_hat) {
    if (residuals.size() != sigma_hat.size()) throw ShapeError("extract_outliers: length mismatch");
    if (!(rho1 > 0.0)) throw DomainError("extract_outliers: rho1 must be > 0");
    OutlierEstimate out;
    out.o_hat = Vector::Zero(residuals.size());
    for (Eigen::Index i = 0; i < residuals.size(); ++i) {
        const double thr = rho1 * sigma_hat[i];
        const double r = residuals[i];
        if (std::abs(r) > thr) {
            out.flags.push_back(static_cast<int>(i));
            out.o_hat[i] = std::copysign(std::abs(r) - thr, r);
        }
    }
    return out;
}

}  // namespace pme
