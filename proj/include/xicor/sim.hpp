#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/exact.hpp"
#include "xicor/mc.hpp"
#include "xicor/model.hpp"
#include "xicor/parallel.hpp"
#include "xicor/rank.hpp"
#include "xicor/stats.hpp"

namespace xicor {

struct Histogram {
    std::vector<double> edges;        // size counts.size() + 1
    std::vector<std::size_t> counts;
};

// Freedman-Diaconis binning; degenerate spreads fall back to a single bin.
inline Histogram fd_histogram(std::vector<double> values) {
    Histogram h;
    if (values.empty()) return h;
    std::sort(values.begin(), values.end());
    const double lo = values.front(), hi = values.back();
    const double iqr = quantile_type7(values, 0.75) - quantile_type7(values, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
    std::size_t nbins = 1;
    if (width > 0.0 && hi > lo)
        nbins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
    nbins = std::min<std::size_t>(nbins, 10000);
    const double span = hi > lo ? hi - lo : 1.0;
    h.edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i)
        h.edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(nbins);
    h.counts.assign(nbins, 0);
    for (double v : values) {
        std::size_t b = static_cast<std::size_t>((v - lo) / span * static_cast<double>(nbins));
        if (b >= nbins) b = nbins - 1;
        ++h.counts[b];
    }
    return h;
}

// KS sup-distance between the empirical CDF of values/sigma and the standard
// normal CDF.
inline double ks_normal(const std::vector<double>& values, double sigma) {
    if (values.empty()) fail("BadParams", "ks_normal: empty sample");
    if (!(sigma > 0.0)) fail("ZeroSigma", "ks_normal requires sigma > 0");
    std::vector<double> scaled(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) scaled[i] = values[i] / sigma;
    return ks_statistic(std::move(scaled), [](double x) { return norm_cdf(x); });
}

struct SimResult {
    std::vector<double> draws;       // sqrt(n) (xi_n - xi) per replicate
    double xi_theory = 0.0;
    double sigma_sq_theory = 0.0;
    std::string theory_method;
    bool zero_sigma = false;
    double ks_distance = std::nan("");
    Histogram histogram;
    std::string model_name;
    std::size_t n = 0, reps = 0;
    std::uint64_t seed = 0;
};

// Repeated sampling experiment for the CLT: each replicate draws a fresh
// sample of size n, computes xi_n and emits sqrt(n)(xi_n - xi). Theory source
// is exact enumeration when the model has a finite PMF, Monte Carlo otherwise.
// sigma feeds the KS standardization, and its noise scales with the outer
// replicate count; callers that need a tight sigma should raise mc_outer and
// keep mc_inner at the minimum.
inline SimResult run_clt_experiment(const Model& model, std::size_t n, std::size_t reps,
                                    std::uint64_t seed, std::size_t mc_outer = 10000,
                                    std::size_t mc_inner = 1000) {
    if (n < 100 || reps < 100) fail("BadParams", "need n >= 100 and reps >= 100");
    SimResult res;
    res.model_name = model.name;
    res.n = n;
    res.reps = reps;
    res.seed = seed;

    TheoryReport theory;
    if (model.pmf) {
        theory = exact_sigma(*model.pmf);
    } else {
        theory = mc_theory(*model.gen, mc_outer, mc_inner, mix64(seed ^ 0x7e0));
    }
    res.theory_method = theory.method;
    res.xi_theory = theory.xi.value;
    res.sigma_sq_theory = theory.sigma_sq.value;

    if (!model.pmf) {
        // The centering error of xi gets multiplied by sqrt(n), so mu1 and mu2
        // are refined with cheap single-draw replicates until the induced
        // shift of the standardized draws is a small fraction of sigma.
        const GenerativeModel& g = *model.gen;
        const double sigma = std::sqrt(std::max(res.sigma_sq_theory, 1e-4));
        const double err_target = 0.03 * sigma / std::sqrt(static_cast<double>(n));
        const double m1 = theory.mu1.value, m2 = std::max(theory.mu2.value, 1e-6);
        const double coef = 0.5 * std::sqrt(1.0 / (4.0 * m2 * m2) +
                                            m1 * m1 / (4.0 * m2 * m2 * m2 * m2));
        const double want = coef * coef / (err_target * err_target);
        const std::size_t chunk = 100000;
        const std::size_t nchunks = static_cast<std::size_t>(
            std::clamp(std::ceil(want / static_cast<double>(chunk)), 10.0, 6000.0));
        std::vector<double> s1(nchunks), s2(nchunks);
        const Rng mroot(mix64(seed ^ 0x5eed));
        parallel_for(nchunks, [&](std::size_t t) {
            Rng r = mroot.split(t);
            double a1 = 0.0, a2 = 0.0;
            for (std::size_t i = 0; i < chunk; ++i) {
                const double x = g.sample_joint(r).first;
                const double y1 = g.sample_y_given_x(x, r);
                const double y2 = g.sample_y_given_x(x, r);
                const double y3 = g.sample_joint(r).second;
                a1 += (std::min(y1, y2) < y3 && y3 <= std::max(y1, y2)) ? 1.0 : 0.0;
                const double a = g.sample_joint(r).second;
                const double b = g.sample_joint(r).second;
                const double c = g.sample_joint(r).second;
                a2 += (a < b && b <= c) ? 1.0 : 0.0;
            }
            s1[t] = a1;
            s2[t] = a2;
        });
        double mu1 = 0.0, mu2 = 0.0;
        for (std::size_t t = 0; t < nchunks; ++t) {
            mu1 += s1[t];
            mu2 += s2[t];
        }
        const double total = static_cast<double>(nchunks) * static_cast<double>(chunk);
        mu1 /= total;
        mu2 /= total;
        if (mu2 > 0.0) res.xi_theory = 1.0 - mu1 / (2.0 * mu2);
    }

    const Rng root(seed);
    res.draws.resize(reps);
    const double root_n = std::sqrt(static_cast<double>(n));
    parallel_for(reps, [&](std::size_t rep) {
        Rng rng = root.split(rep);
        const std::uint64_t sample_seed = rng.u64();
        const std::uint64_t tie_seed = rng.u64();
        const Sample s = draw_sample(model, n, sample_seed);
        res.draws[rep] = root_n * (xi_n(s, tie_seed) - res.xi_theory);
    });

    res.histogram = fd_histogram(res.draws);
    if (res.sigma_sq_theory > 1e-12) {
        res.ks_distance = ks_normal(res.draws, std::sqrt(res.sigma_sq_theory));
    } else {
        res.zero_sigma = true;  // standardization impossible; raw draws reported
    }
    return res;
}

}  // namespace xicor
