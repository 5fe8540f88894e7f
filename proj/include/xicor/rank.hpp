#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/model.hpp"
#include "xicor/rng.hpp"

namespace xicor {

using int128 = __int128;

// The X-sorted sample: Y values reordered by ascending X (ties broken at
// random), ranks r_i = #{j : Y'_j <= Y'_i}, counts l_i = #{j : Y'_j >= Y'_i},
// and the permutation that was applied (0-based indices into the sample).
struct RankData {
    std::vector<double> y_prime;
    std::vector<std::int64_t> r;
    std::vector<std::int64_t> l;
    std::vector<std::size_t> perm;

    std::size_t size() const noexcept { return y_prime.size(); }
};

// Sorts by key (x_i, u_i) with u_i i.i.d. uniform, which gives X-ties a
// uniformly random relative order. Ranks via sorted copy + binary search,
// O(n log n) overall.
inline RankData reorder_by_x(const Sample& sample, std::uint64_t seed) {
    const std::size_t n = sample.size();
    Rng rng(seed);
    std::vector<double> u(n);
    for (auto& v : u) v = rng.uniform();

    RankData rd;
    rd.perm.resize(n);
    std::iota(rd.perm.begin(), rd.perm.end(), std::size_t{0});
    std::sort(rd.perm.begin(), rd.perm.end(), [&](std::size_t a, std::size_t b) {
        const double xa = sample.pairs[a].first, xb = sample.pairs[b].first;
        if (xa != xb) return xa < xb;
        return u[a] < u[b];
    });

    rd.y_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) rd.y_prime[i] = sample.pairs[rd.perm[i]].second;

    std::vector<double> sorted_y = rd.y_prime;
    std::sort(sorted_y.begin(), sorted_y.end());
    rd.r.resize(n);
    rd.l.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = rd.y_prime[i];
        rd.r[i] = std::upper_bound(sorted_y.begin(), sorted_y.end(), y) - sorted_y.begin();
        rd.l[i] = static_cast<std::int64_t>(n) -
                  (std::lower_bound(sorted_y.begin(), sorted_y.end(), y) - sorted_y.begin());
    }
    return rd;
}

// Integer numerator and denominator sums of xi_n. den can reach ~n^3/4, so
// sums are accumulated in 128-bit integers.
struct XiSums {
    int128 num = 0;  // sum |r_{i+1} - r_i|
    int128 den = 0;  // sum l_i (n - l_i)
    std::size_t n = 0;
};

inline XiSums xi_sums(const RankData& rd) {
    XiSums s;
    s.n = rd.size();
    const auto n = static_cast<std::int64_t>(s.n);
    for (std::size_t i = 0; i + 1 < rd.size(); ++i) {
        const std::int64_t d = rd.r[i + 1] - rd.r[i];
        s.num += d >= 0 ? d : -d;
    }
    for (std::size_t i = 0; i < rd.size(); ++i) s.den += int128(rd.l[i]) * (n - rd.l[i]);
    return s;
}

// xi_n = 1 - n * sum|r_{i+1}-r_i| / (2 * sum l_i(n-l_i)). Undefined (AllYEqual)
// when the denominator vanishes, i.e. Y is constant in the sample.
inline double xi_n(const RankData& rd) {
    const XiSums s = xi_sums(rd);
    if (s.den == 0) fail("AllYEqual", "xi_n undefined: all Y values equal");
    const long double num = static_cast<long double>(int128(s.n) * s.num);
    const long double den = 2.0L * static_cast<long double>(s.den);
    return static_cast<double>(1.0L - num / den);
}

inline double xi_n(const Sample& sample, std::uint64_t seed) {
    return xi_n(reorder_by_x(sample, seed));
}

}  // namespace xicor
