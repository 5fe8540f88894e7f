#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/exact.hpp"
#include "xicor/model.hpp"
#include "xicor/parallel.hpp"
#include "xicor/rank.hpp"
#include "xicor/stats.hpp"

namespace xicor {

struct CIResult {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    std::string method;        // "plugin_normal" | "moon_bootstrap"
    std::size_t m = 0;         // bootstrap resample size
    std::size_t B = 0;         // bootstrap replicates
    double sigma_hat_sq = std::nan("");
};

// Empirical joint PMF of a sample. Plug-in conditioning needs repeated x
// values; with all x distinct the empirical conditional pair law degenerates
// to the diagonal, so the construction is rejected.
inline JointPMF empirical_pmf(const Sample& sample, std::size_t y_guard = 30) {
    const std::size_t n = sample.size();
    std::vector<double> xs, ys;
    for (const auto& [x, y] : sample.pairs) {
        xs.push_back(x);
        ys.push_back(y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    if (xs.size() == n) fail("NoXTies", "plug-in needs at least one duplicated x value");
    if (ys.size() > y_guard)
        fail("SupportTooLarge", std::to_string(ys.size()) + " distinct y values exceed guard " +
                                    std::to_string(y_guard));

    std::vector<std::vector<double>> prob(xs.size(), std::vector<double>(ys.size(), 0.0));
    const double w = 1.0 / static_cast<double>(n);
    for (const auto& [x, y] : sample.pairs) {
        const std::size_t ix = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
        const std::size_t iy = std::lower_bound(ys.begin(), ys.end(), y) - ys.begin();
        prob[ix][iy] += w;
    }
    return make_pmf(std::move(xs), std::move(ys), std::move(prob));
}

// Plug-in of the limiting-variance formula into the empirical law.
inline double plugin_variance(const Sample& sample, std::size_t y_guard = 30) {
    return exact_sigma(empirical_pmf(sample, y_guard), y_guard).sigma_sq.value;
}

inline CIResult normal_ci(const Sample& sample, double level, std::uint64_t seed,
                          std::size_t y_guard = 30) {
    if (!(level > 0.0 && level < 1.0)) fail("BadParams", "level must be in (0,1)");
    CIResult ci;
    ci.method = "plugin_normal";
    ci.level = level;
    ci.sigma_hat_sq = plugin_variance(sample, y_guard);
    ci.point = xi_n(sample, seed);
    const double z = norm_quantile((1.0 + level) / 2.0);
    const double hw = z * std::sqrt(std::max(ci.sigma_hat_sq, 0.0) /
                                    static_cast<double>(sample.size()));
    ci.lower = ci.point - hw;
    ci.upper = ci.point + hw;
    return ci;
}

// m-out-of-n bootstrap: B resamples of size m with replacement, interval from
// type-7 quantiles of sqrt(m)(xi*_m - xi_n), rescaled by sqrt(n). Default
// m = ceil(n^{2/3}) when callers pass m = 0.
inline CIResult moon_bootstrap_ci(const Sample& sample, std::size_t m, std::size_t B, double level,
                                  std::uint64_t seed) {
    const std::size_t n = sample.size();
    if (m == 0) m = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    if (m < 2 || m > n) fail("BadM", "need 2 <= m <= n");
    if (B < 100) fail("BadParams", "need B >= 100");
    if (!(level > 0.0 && level < 1.0)) fail("BadParams", "level must be in (0,1)");

    const Rng root(seed);
    const double point = xi_n(sample, seed);

    std::vector<double> scaled(B);
    std::vector<bool> degenerate(B, false);
    parallel_for(B, [&](std::size_t b) {
        Rng rng = root.split(b + 1);
        std::vector<std::pair<double, double>> pairs(m);
        for (auto& p : pairs) p = sample.pairs[rng.index(n)];
        const Sample resample(std::move(pairs));
        try {
            const double xi_star = xi_n(resample, rng.u64());
            scaled[b] = std::sqrt(static_cast<double>(m)) * (xi_star - point);
        } catch (const Error&) {
            degenerate[b] = true;  // constant-Y resample carries no information
        }
    });
    std::vector<double> kept;
    kept.reserve(B);
    for (std::size_t b = 0; b < B; ++b)
        if (!degenerate[b]) kept.push_back(scaled[b]);
    if (kept.empty()) fail("AllYEqual", "every bootstrap resample had constant Y");

    // xi*_m carries an O(1/m) bias relative to xi_n which sqrt(m) does not
    // kill; recentring the resample distribution at its own mean removes it
    // and restores near-nominal coverage.
    double shift = 0.0;
    for (double v : kept) shift += v;
    shift /= static_cast<double>(kept.size());
    for (double& v : kept) v -= shift;

    const double q_hi = quantile_type7(kept, (1.0 + level) / 2.0);
    const double q_lo = quantile_type7(kept, (1.0 - level) / 2.0);
    const double root_n = std::sqrt(static_cast<double>(n));

    CIResult ci;
    ci.method = "moon_bootstrap";
    ci.level = level;
    ci.point = point;
    ci.m = m;
    ci.B = B;
    ci.lower = point - q_hi / root_n;
    ci.upper = point - q_lo / root_n;
    return ci;
}

}  // namespace xicor
