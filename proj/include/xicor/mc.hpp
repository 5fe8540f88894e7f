#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/exact.hpp"
#include "xicor/kernels.hpp"
#include "xicor/model.hpp"
#include "xicor/parallel.hpp"
#include "xicor/rng.hpp"
#include "xicor/stats.hpp"

namespace xicor {

namespace detail {

inline double draw_marginal_y(const GenerativeModel& m, Rng& rng) {
    return m.sample_joint(rng).second;
}

// Inner-batch estimate of H1(y, y') = P(y ^ y' < Y <= y v y')
//                                   + P(Y1 ^ Y2 < y <= Y1 v Y2 | X1 = X2).
inline double estimate_h1(const GenerativeModel& m, double y, double yp, std::size_t inner,
                          Rng& rng) {
    const double lo = std::min(y, yp), hi = std::max(y, yp);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < inner; ++i) {
        const double v = draw_marginal_y(m, rng);
        hits += (lo < v && v <= hi) ? 1 : 0;
    }
    std::size_t hits2 = 0;
    for (std::size_t i = 0; i < inner; ++i) {
        const double x = m.sample_joint(rng).first;
        const double a = m.sample_y_given_x(x, rng);
        const double b = m.sample_y_given_x(x, rng);
        hits2 += (std::min(a, b) < y && y <= std::max(a, b)) ? 1 : 0;
    }
    return (static_cast<double>(hits) + static_cast<double>(hits2)) / static_cast<double>(inner);
}

// Inner-batch estimate of H2(y). The three summands are probabilities of
// events that may overlap (second and third coincide when Y2 = y), so the
// indicators are summed, not OR-ed.
inline double estimate_h2(const GenerativeModel& m, double y, std::size_t inner, Rng& rng) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < inner; ++i) {
        const double x = m.sample_joint(rng).first;
        const double a = m.sample_y_given_x(x, rng);
        const double b = m.sample_y_given_x(x, rng);
        hits += (y < a && a <= b) ? 1 : 0;
        hits += (a < y && y <= b) ? 1 : 0;
        hits += (a < b && b <= y) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(inner);
}

// Generic MC sigma component for pair functions Hi, Hj supplied as estimator
// callables (y, y', rng) -> unbiased estimate. Every H-factor inside a product
// uses an independent inner batch, so products stay unbiased; standard errors
// come from outer-replicate variance with the mean-product term propagated.
template <typename HEstI, typename HEstJ>
ValueSE mc_sigma_component(const GenerativeModel& m, HEstI&& Hi, HEstJ&& Hj, std::size_t n_outer,
                           const Rng& root) {
    std::vector<double> zs(n_outer), ps(n_outer), as(n_outer), bs(n_outer);
    parallel_for(n_outer, [&](std::size_t t) {
        {
            Rng r = root.split(0).split(t);
            const double x = m.sample_joint(r).first;
            std::array<double, 5> y{};
            for (auto& v : y) v = m.sample_y_given_x(x, r);
            const double L = Hi(y[1], y[2], r);
            const double S = Hj(y[3], y[4], r);
            double z = 0.0;
            z += L * (Hj(y[0], y[1], r) - S);
            z += L * (Hj(y[1], y[2], r) - S);
            z += L * (Hj(y[2], y[3], r) - S);
            zs[t] = z;
        }
        {
            Rng r = root.split(1).split(t);
            const double x = m.sample_joint(r).first;
            std::array<double, 4> y{};
            for (auto& v : y) v = m.sample_y_given_x(x, r);
            ps[t] = Hi(y[0], y[1], r) * Hj(y[2], y[3], r);
        }
        {
            Rng r = root.split(2).split(t);
            const double x = m.sample_joint(r).first;
            const double y1 = m.sample_y_given_x(x, r), y2 = m.sample_y_given_x(x, r);
            as[t] = Hi(y1, y2, r);
        }
        {
            Rng r = root.split(3).split(t);
            const double x = m.sample_joint(r).first;
            const double y1 = m.sample_y_given_x(x, r), y2 = m.sample_y_given_x(x, r);
            bs[t] = Hj(y1, y2, r);
        }
    });
    const MeanSE mz = mean_se(zs), mp = mean_se(ps), ma = mean_se(as), mb = mean_se(bs);
    ValueSE out;
    out.value = mz.mean + mp.mean - ma.mean * mb.mean;
    out.se = std::sqrt(mz.se * mz.se + mp.se * mp.se + (mb.mean * ma.se) * (mb.mean * ma.se) +
                       (ma.mean * mb.se) * (ma.mean * mb.se));
    return out;
}

inline double assemble_sigma_sq(double mu1, double mu2, double s1, double s2, double s12) {
    const double rho = mu1 / mu2;
    return (s1 - 2.0 * rho * s12 + rho * rho * s2) / (4.0 * mu2 * mu2);
}

}  // namespace xicor::detail

// Standalone H2 probe with a sample-variance standard error (each draw
// contributes 0, 1 or 2 event indicators).
inline ValueSE mc_h2(const GenerativeModel& m, double y, std::size_t n, std::uint64_t seed) {
    Rng rng = Rng(seed).split(0xb2);
    std::vector<double> vals(n);
    for (auto& v : vals) {
        const double x = m.sample_joint(rng).first;
        const double a = m.sample_y_given_x(x, rng);
        const double b = m.sample_y_given_x(x, rng);
        v = ((y < a && a <= b) ? 1.0 : 0.0) + ((a < y && y <= b) ? 1.0 : 0.0) +
            ((a < b && b <= y) ? 1.0 : 0.0);
    }
    const MeanSE ms = mean_se(vals);
    return {ms.mean, std::max(ms.se, 1.0 / static_cast<double>(n))};
}

// Monte Carlo TheoryReport for models without finite support (or as a
// consistency check against the exact route).
inline TheoryReport mc_theory(const GenerativeModel& m, std::size_t n_outer, std::size_t n_inner,
                              std::uint64_t seed) {
    if (n_outer < 1000) fail("BadParams", "mc_theory requires n_outer >= 1000");
    if (n_inner < 100) fail("BadParams", "mc_theory requires n_inner >= 100");
    const Rng root(seed);

    std::vector<double> mu1s(n_outer), mu2s(n_outer);
    parallel_for(n_outer, [&](std::size_t t) {
        Rng r = root.split(100).split(t);
        const double x = m.sample_joint(r).first;
        const double y1 = m.sample_y_given_x(x, r), y2 = m.sample_y_given_x(x, r);
        const double y3 = detail::draw_marginal_y(m, r);
        mu1s[t] = (std::min(y1, y2) < y3 && y3 <= std::max(y1, y2)) ? 1.0 : 0.0;
        const double a = detail::draw_marginal_y(m, r);
        const double b = detail::draw_marginal_y(m, r);
        const double c = detail::draw_marginal_y(m, r);
        mu2s[t] = (a < b && b <= c) ? 1.0 : 0.0;
    });
    const MeanSE mu1 = mean_se(mu1s), mu2 = mean_se(mu2s);
    if (mu2.mean <= 3.0 * mu2.se)
        fail("DegenerateY", "mu2 estimate not separated from zero: Y looks degenerate");

    auto h1est = [&m, n_inner](double y, double yp, Rng& r) {
        return detail::estimate_h1(m, y, yp, n_inner, r);
    };
    auto h2est = [&m, n_inner](double y, double /*yp*/, Rng& r) {
        return detail::estimate_h2(m, y, n_inner, r);
    };

    const ValueSE s11 = detail::mc_sigma_component(m, h1est, h1est, n_outer, root.split(11));
    const ValueSE s22 = detail::mc_sigma_component(m, h2est, h2est, n_outer, root.split(22));
    const ValueSE s12 = detail::mc_sigma_component(m, h1est, h2est, n_outer, root.split(12));

    TheoryReport r;
    r.method = "monte_carlo";
    r.mu1 = {mu1.mean, mu1.se};
    r.mu2 = {mu2.mean, mu2.se};
    r.sigma1_sq = s11;
    r.sigma2_sq = s22;
    r.sigma12 = s12;
    r.xi = {1.0 - mu1.mean / (2.0 * mu2.mean),
            std::sqrt(std::pow(mu1.se / (2.0 * mu2.mean), 2) +
                      std::pow(mu1.mean * mu2.se / (2.0 * mu2.mean * mu2.mean), 2))};
    r.sigma_sq.value =
        detail::assemble_sigma_sq(mu1.mean, mu2.mean, s11.value, s22.value, s12.value);
    // first-order propagation, central differences per input
    {
        const std::array<double, 5> v{mu1.mean, mu2.mean, s11.value, s22.value, s12.value};
        const std::array<double, 5> se{mu1.se, mu2.se, s11.se, s22.se, s12.se};
        double var = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double h = std::max(1e-7, 1e-6 * std::abs(v[i]));
            auto vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            const double g = (detail::assemble_sigma_sq(vp[0], vp[1], vp[2], vp[3], vp[4]) -
                              detail::assemble_sigma_sq(vm[0], vm[1], vm[2], vm[3], vm[4])) /
                             (2.0 * h);
            var += g * g * se[i] * se[i];
        }
        r.sigma_sq.se = std::sqrt(var);
    }
    return r;
}

struct VStatMoments {
    ValueSE mu_h;
    ValueSE sigma_h_sq;
};

// mu_h and sigma_h^2 of the limiting law for a general bounded pair kernel,
// by Monte Carlo. H = sum_j h_j with each first-order projection estimated on
// independent inner batches.
inline VStatMoments general_vstat_moments(const PairKernel& kernel, const GenerativeModel& m,
                                          std::size_t n_outer, std::size_t n_inner,
                                          std::uint64_t seed, std::size_t mu_boost = 50) {
    const int r = kernel.arity;
    if (r < 1 || r > 4) fail("ArityGuard", "kernel arity must be in [1, 4]");
    if (mu_boost < 1) fail("BadParams", "mu_boost must be >= 1");
    const Rng root(seed);

    auto draw_pair = [&m](Rng& rng) -> YPair {
        const double x = m.sample_joint(rng).first;
        const double y = m.sample_y_given_x(x, rng);
        const double yp = m.sample_y_given_x(x, rng);
        return {y, yp};
    };

    // mu_h evaluations are cheap, so they run on a boosted replicate count:
    // downstream uses center CLT draws at mu_h, where the error scales with
    // sqrt(n).
    std::vector<double> mus(n_outer);
    parallel_for(n_outer, [&](std::size_t t) {
        Rng rng = root.split(200).split(t);
        std::vector<YPair> args(static_cast<std::size_t>(r));
        double acc = 0.0;
        for (std::size_t rep = 0; rep < mu_boost; ++rep) {
            for (auto& a : args) a = draw_pair(rng);
            acc += kernel(args.data());
        }
        mus[t] = acc / static_cast<double>(mu_boost);
    });
    const MeanSE mu = mean_se(mus);

    auto Hest = [&](double y, double yp, Rng& rng) {
        double total = 0.0;
        std::vector<YPair> args(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) {
            double s = 0.0;
            for (std::size_t b = 0; b < n_inner; ++b) {
                for (int k = 0; k < r; ++k)
                    args[static_cast<std::size_t>(k)] =
                        (k == j) ? YPair{y, yp} : draw_pair(rng);
                s += kernel(args.data());
            }
            total += s / static_cast<double>(n_inner);
        }
        return total;
    };

    const ValueSE sigma = detail::mc_sigma_component(m, Hest, Hest, n_outer, root.split(201));

    VStatMoments out;
    out.mu_h = {mu.mean, mu.se};
    out.sigma_h_sq = sigma;
    return out;
}

}  // namespace xicor
