#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pme {

/// Counter-based generator: draw i of stream k is splitmix64_mix(key + (i+1) * golden),
/// key = splitmix64_mix(seed ^ (k * stream_constant)). Any draw can be recomputed
/// from (seed, stream, index) alone, which keeps samples portable.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kStream = 0xD1B54A32D192ED03ULL;

    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ (stream * kStream))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t i) const { return mix(key_ + (i + 1) * kGolden); }
    std::uint64_t next() { return at(counter_++); }

    /// Uniform on the open interval ]0, 1[.
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return normal_quantile(uniform()); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;

public:
    /// Standard normal quantile: rational approximation (rel. error ~1e-9)
    /// followed by one Halley step on erfc.
    static double normal_quantile(double u) {
        if (u <= 0.0) return -std::numeric_limits<double>::infinity();
        if (u >= 1.0) return std::numeric_limits<double>::infinity();
        static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                       1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
        static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                       6.680131188771972e+01,  -1.328068155288572e+01};
        static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                       -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
        static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                       3.754408661907416e+00};
        constexpr double lo = 0.02425;
        double x;
        if (u < lo) {
            const double q = std::sqrt(-2.0 * std::log(u));
            x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        } else if (u <= 1.0 - lo) {
            const double q = u - 0.5;
            const double r = q * q;
            x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
                (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
        } else {
            const double q = std::sqrt(-2.0 * std::log1p(-u));
            x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        }
        const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
        const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        return x - step / (1.0 + 0.5 * x * step);
    }
};

}  // namespace pme
