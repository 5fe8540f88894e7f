#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "xicor/error.hpp"

namespace xicor {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// Standard normal quantile: Acklam's rational approximation refined with one
// Halley step against erfc, accurate to ~1e-15 over (0, 1).
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail("BadParams", "norm_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    double e = norm_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;       // standard error of the mean
    double variance = 0.0; // sample variance (n-1 denominator)
};

inline MeanSE mean_se(const std::vector<double>& xs) {
    MeanSE out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    out.mean = m;
    if (n > 1) {
        out.variance = ss / static_cast<double>(n - 1);
        out.se = std::sqrt(out.variance / static_cast<double>(n));
    }
    return out;
}

// Type-7 quantile (linear interpolation of order statistics), the R default.
// Fixed here so results are cross-implementation reproducible.
inline double quantile_type7(std::vector<double> xs, double p) {
    if (xs.empty()) fail("BadParams", "quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) fail("BadParams", "quantile level outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n == 1) return xs[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= n) return xs[n - 1];
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

// One-sample Kolmogorov-Smirnov sup-distance between the empirical CDF of
// `values` and the continuous CDF `cdf`.
template <typename Cdf>
double ks_statistic(std::vector<double> values, Cdf&& cdf) {
    if (values.empty()) fail("BadParams", "ks_statistic: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace xicor
