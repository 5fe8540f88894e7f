#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/rank.hpp"

namespace xicor {

using YPair = std::pair<double, double>;

// h1((s1,s2),(t1,t2)) = sgn(s2-s1) {1(t1 <= s2) - 1(t1 <= s1)}; ignores t2.
inline int kernel_h1(const YPair& s, const YPair& t) {
    const int sgn = s.second > s.first ? 1 : (s.second < s.first ? -1 : 0);
    if (sgn == 0) return 0;
    const int d = (t.first <= s.second ? 1 : 0) - (t.first <= s.first ? 1 : 0);
    return sgn * d;
}

// h2(s,t,u) = 1(t >= s) 1(u < s).
inline int kernel_h2(double s, double t, double u) {
    return (t >= s && u < s) ? 1 : 0;
}

// Bounded kernel on r consecutive-pair arguments. The bound is declared, not
// inferred; evaluation asserts it in debug builds only.
struct PairKernel {
    int arity = 1;
    double bound = 1.0;
    std::function<double(const YPair*)> eval;

    double operator()(const YPair* args) const {
        const double v = eval(args);
        assert(std::abs(v) <= bound + 1e-12);
        return v;
    }
};

inline PairKernel h1_kernel() {
    return {2, 1.0, [](const YPair* a) { return static_cast<double>(kernel_h1(a[0], a[1])); }};
}

// h2 lifted to pair data: arity 3, reads only the first coordinate of each
// pair. This is what makes the pair-based V-statistic theory apply to the
// denominator kernel.
inline PairKernel h2_lifted_kernel() {
    return {3, 1.0, [](const YPair* a) {
                return static_cast<double>(kernel_h2(a[0].first, a[1].first, a[2].first));
            }};
}

struct VStatResult {
    double value = 0.0;
    double normalization = 0.0;  // (n-1)^r
    std::uint64_t terms = 0;
};

namespace detail {

inline std::vector<YPair> consecutive_pairs(const RankData& rd) {
    std::vector<YPair> pairs(rd.size() - 1);
    for (std::size_t i = 0; i + 1 < rd.size(); ++i)
        pairs[i] = {rd.y_prime[i], rd.y_prime[i + 1]};
    return pairs;
}

}  // namespace detail

// V-statistic of `kernel` over the consecutive-pair sequence, averaging over
// all (n-1)^r index tuples. Direct summation; r >= 3 is guarded to desk scale.
inline VStatResult v_statistic(const PairKernel& kernel, const RankData& rd) {
    if (rd.size() < 2) fail("BadParams", "need at least one consecutive pair");
    const auto pairs = detail::consecutive_pairs(rd);
    const std::size_t m = pairs.size();
    const int r = kernel.arity;
    if (r < 1) fail("BadParams", "kernel arity must be >= 1");
    if (r >= 3 && rd.size() > 400) fail("ArityTooLargeForN", "generic O(n^r) summation guarded to n <= 400");

    std::vector<YPair> args(static_cast<std::size_t>(r));
    std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
    double sum = 0.0;
    std::uint64_t terms = 1;
    for (int k = 0; k < r; ++k) terms *= m;
    // odometer over {0..m-1}^r
    for (std::uint64_t t = 0; t < terms; ++t) {
        for (int k = 0; k < r; ++k) args[static_cast<std::size_t>(k)] = pairs[idx[static_cast<std::size_t>(k)]];
        sum += kernel(args.data());
        for (int k = r - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < m) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    VStatResult out;
    out.normalization = std::pow(static_cast<double>(m), r);
    out.value = sum / out.normalization;
    out.terms = terms;
    return out;
}

// V_{h1} in O(n log n): sum_{i,j<=n-1} sgn(Y'_{i+1}-Y'_i){1(Y'_j<=Y'_{i+1}) - 1(Y'_j<=Y'_i)}
// where the inner sum over j is a rank count over the first n-1 values.
inline VStatResult v_statistic_h1(const RankData& rd) {
    const std::size_t m = rd.size() - 1;
    if (m < 1) fail("BadParams", "need at least one consecutive pair");
    std::vector<double> firsts(rd.y_prime.begin(), rd.y_prime.end() - 1);
    std::sort(firsts.begin(), firsts.end());
    auto count_le = [&](double v) {
        return static_cast<std::int64_t>(std::upper_bound(firsts.begin(), firsts.end(), v) - firsts.begin());
    };
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = rd.y_prime[i], b = rd.y_prime[i + 1];
        if (a == b) continue;
        const int sgn = b > a ? 1 : -1;
        sum += sgn * (count_le(b) - count_le(a));
    }
    VStatResult out;
    out.normalization = static_cast<double>(m) * static_cast<double>(m);
    out.value = static_cast<double>(sum) / out.normalization;
    out.terms = static_cast<std::uint64_t>(m) * m;
    return out;
}

// V for the lifted h2 over first coordinates z_1..z_m:
// sum_{i,j,k} 1(z_j >= z_i) 1(z_k < z_i) = sum_i ge_i * lt_i.
inline VStatResult v_statistic_h2(const RankData& rd) {
    const std::size_t m = rd.size() - 1;
    if (m < 1) fail("BadParams", "need at least one consecutive pair");
    std::vector<double> z(rd.y_prime.begin(), rd.y_prime.end() - 1);
    std::vector<double> sorted = z;
    std::sort(sorted.begin(), sorted.end());
    int128 sum = 0;
    for (double v : z) {
        const std::int64_t lt = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        const std::int64_t ge = static_cast<std::int64_t>(m) - lt;
        sum += int128(ge) * lt;
    }
    VStatResult out;
    out.normalization = std::pow(static_cast<double>(m), 3);
    out.value = static_cast<double>(static_cast<long double>(sum) / out.normalization);
    out.terms = static_cast<std::uint64_t>(m) * m * m;
    return out;
}

// Checks the algebraic rewriting of xi_n. num/den "direct" come from the rank
// sums, "kernel" from independent count-based evaluation of the double/triple
// indicator sums (full index ranges, exact in integers). residual compares
// 1 - xi_n against the truncated kernel ratio V_{h1} / (2 V_{h2}).
struct XiDecomposition {
    std::int64_t num_direct = 0;
    std::int64_t num_kernel = 0;
    long double den_direct = 0;
    long double den_kernel = 0;
    bool den_equal = false;
    double v_h1 = 0.0;
    double v_h2 = 0.0;
    double xi = 0.0;
    double residual = 0.0;
};

inline XiDecomposition decompose_xi(const RankData& rd) {
    const std::size_t n = rd.size();
    const XiSums sums = xi_sums(rd);
    if (sums.den == 0) fail("AllYEqual", "decompose_xi undefined: all Y values equal");

    XiDecomposition d;
    d.num_direct = static_cast<std::int64_t>(sums.num);

    // numerator identity, j over the full range 1..n
    std::vector<double> all_sorted = rd.y_prime;
    std::sort(all_sorted.begin(), all_sorted.end());
    auto count_le_all = [&](double v) {
        return static_cast<std::int64_t>(std::upper_bound(all_sorted.begin(), all_sorted.end(), v) -
                                         all_sorted.begin());
    };
    std::int64_t num_kernel = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = rd.y_prime[i], b = rd.y_prime[i + 1];
        if (a == b) continue;
        const int sgn = b > a ? 1 : -1;
        num_kernel += sgn * (count_le_all(b) - count_le_all(a));
    }
    d.num_kernel = num_kernel;

    // denominator identity, recounted from scratch
    int128 den_kernel = 0;
    for (double v : rd.y_prime) {
        const std::int64_t lt = std::lower_bound(all_sorted.begin(), all_sorted.end(), v) - all_sorted.begin();
        const std::int64_t ge = static_cast<std::int64_t>(n) - lt;
        den_kernel += int128(ge) * lt;
    }
    d.den_direct = static_cast<long double>(sums.den);
    d.den_kernel = static_cast<long double>(den_kernel);
    d.den_equal = sums.den == den_kernel;

    d.v_h1 = v_statistic_h1(rd).value;
    d.v_h2 = v_statistic_h2(rd).value;
    d.xi = xi_n(rd);
    d.residual = std::abs((1.0 - d.xi) - d.v_h1 / (2.0 * d.v_h2));
    return d;
}

}  // namespace xicor
