#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/model.hpp"

namespace xicor {

struct ValueSE {
    double value = 0.0;
    double se = 0.0;
};

// Population quantities of the limiting-variance formula, exact (se = 0) or
// Monte Carlo (se from outer-replicate variance). xi_dss is the variance-ratio
// route, available on the exact path only.
struct TheoryReport {
    ValueSE mu1, mu2, sigma1_sq, sigma2_sq, sigma12, sigma_sq, xi;
    double xi_dss = std::nan("");
    std::string method;  // "exact" | "monte_carlo"
};

// q(y, y') = sum_x p(x) p(y|x) p(y'|x): the law of a Y-pair drawn with a
// shared X ("conditional on X1 = X2", mixture semantics).
inline std::vector<std::vector<double>> conditional_pair_law(const JointPMF& pmf) {
    const std::size_t nx = pmf.support_x.size(), ny = pmf.support_y.size();
    std::vector<std::vector<double>> q(ny, std::vector<double>(ny, 0.0));
    for (std::size_t i = 0; i < nx; ++i) {
        if (pmf.px[i] <= 0.0) continue;
        for (std::size_t a = 0; a < ny; ++a) {
            if (pmf.y_given_x[i][a] <= 0.0) continue;
            const double w = pmf.px[i] * pmf.y_given_x[i][a];
            for (std::size_t b = 0; b < ny; ++b) q[a][b] += w * pmf.y_given_x[i][b];
        }
    }
    return q;
}

// H1, H2 and the pair law on the Y support. Index comparisons stand in for
// value comparisons since the support is strictly increasing.
// Note H1(y, y') is not symmetric: its second summand depends on y alone.
struct HTables {
    std::vector<std::vector<double>> h1;  // h1[a][b], a = first argument
    std::vector<double> h2;
    std::vector<std::vector<double>> q;
};

inline HTables exact_h_tables(const JointPMF& pmf) {
    const std::size_t ny = pmf.support_y.size();
    HTables t;
    t.q = conditional_pair_law(pmf);

    std::vector<double> cum(ny + 1, 0.0);  // cum[k] = P(Y <= y_{k-1})
    for (std::size_t j = 0; j < ny; ++j) cum[j + 1] = cum[j] + pmf.py[j];

    // between[a][b] = P(min(y_a,y_b) < Y <= max(y_a,y_b))
    auto between = [&](std::size_t a, std::size_t b) {
        const auto lo = std::min(a, b), hi = std::max(a, b);
        return cum[hi + 1] - cum[lo + 1];
    };

    // g1[c] = P(Y1 ^ Y2 < y_c <= Y1 v Y2 | X1 = X2)
    std::vector<double> g1(ny, 0.0);
    t.h2.assign(ny, 0.0);
    for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) {
            const double w = t.q[a][b];
            if (w == 0.0) continue;
            const auto lo = std::min(a, b), hi = std::max(a, b);
            for (std::size_t c = lo + 1; c <= hi; ++c) g1[c] += w;
            for (std::size_t c = 0; c < ny; ++c) {
                const int ind = (c < a && a <= b ? 1 : 0) + (a < c && c <= b ? 1 : 0) +
                                (a < b && b <= c ? 1 : 0);
                t.h2[c] += w * ind;
            }
        }

    t.h1.assign(ny, std::vector<double>(ny, 0.0));
    for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) t.h1[a][b] = between(a, b) + g1[a];
    return t;
}

struct ExactMoments {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double xi = 0.0;
    double xi_dss = 0.0;
};

// mu1 = P(Y1 ^ Y2 < Y3 <= Y1 v Y2 | X1 = X2) with Y3 an independent marginal
// draw; mu2 = P(Y1 < Y2 <= Y3) over independent marginals. xi_dss is the
// variance-ratio definition, evaluated per support point.
inline ExactMoments exact_moments(const JointPMF& pmf) {
    const std::size_t ny = pmf.support_y.size();
    const auto q = conditional_pair_law(pmf);

    std::vector<double> cum(ny + 1, 0.0);
    for (std::size_t j = 0; j < ny; ++j) cum[j + 1] = cum[j] + pmf.py[j];

    ExactMoments m;
    for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) {
            if (q[a][b] == 0.0) continue;
            const auto lo = std::min(a, b), hi = std::max(a, b);
            m.mu1 += q[a][b] * (cum[hi + 1] - cum[lo + 1]);
        }
    for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = a + 1; b < ny; ++b)
            m.mu2 += pmf.py[a] * pmf.py[b] * (1.0 - cum[b]);  // P(Y3 >= y_b)
    if (m.mu2 <= 0.0) fail("DegenerateY", "mu2 = 0: Y is almost surely constant");
    m.xi = 1.0 - m.mu1 / (2.0 * m.mu2);

    // survival functions S(y_j) = P(Y >= y_j), conditional per x
    const std::size_t nx = pmf.support_x.size();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double s = 1.0 - cum[j];
        double es2 = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            if (pmf.px[i] <= 0.0) continue;
            double sx = 0.0;
            for (std::size_t k = j; k < ny; ++k) sx += pmf.y_given_x[i][k];
            es2 += pmf.px[i] * sx * sx;
        }
        num += pmf.py[j] * (es2 - s * s);
        den += pmf.py[j] * s * (1.0 - s);
    }
    m.xi_dss = num / den;
    return m;
}

namespace detail {

// Per-x building blocks for one sigma component. Hi, Hj are pair functions
// given as ny x ny tables (H2 lifted to a pair reads the first coordinate,
// i.e. its table is constant in the second index).
struct SigmaAccum {
    double ksum = 0.0;       // the k in {-1,0,1} expectation, x-mixed
    double e_prod = 0.0;     // E[Hi(Y1,Y2) Hj(Y3,Y4) | common X], x-mixed
    double e_i = 0.0;        // E[Hi(Y1,Y2) | X1 = X2]
    double e_j = 0.0;
};

inline SigmaAccum sigma_component_exact(const JointPMF& pmf,
                                        const std::vector<std::vector<double>>& Hi,
                                        const std::vector<std::vector<double>>& Hj) {
    const std::size_t nx = pmf.support_x.size(), ny = pmf.support_y.size();
    SigmaAccum acc;
    for (std::size_t i = 0; i < nx; ++i) {
        const double px = pmf.px[i];
        if (px <= 0.0) continue;
        const auto& c = pmf.y_given_x[i];

        // A[b] = E[Hj(Y0, y_b)], B[a] = E[Hj(y_a, Y3)], Ei/Ej = full pair means
        std::vector<double> A(ny, 0.0), B(ny, 0.0);
        double Ei = 0.0, Ej = 0.0;
        for (std::size_t a = 0; a < ny; ++a)
            for (std::size_t b = 0; b < ny; ++b) {
                A[b] += c[a] * Hj[a][b];
                B[a] += c[b] * Hj[a][b];
                const double w = c[a] * c[b];
                Ei += w * Hi[a][b];
                Ej += w * Hj[a][b];
            }

        double ksum_x = 0.0;
        for (std::size_t y1 = 0; y1 < ny; ++y1) {
            if (c[y1] <= 0.0) continue;
            for (std::size_t y2 = 0; y2 < ny; ++y2) {
                const double w = c[y1] * c[y2];
                if (w == 0.0) continue;
                ksum_x += w * Hi[y1][y2] * (A[y1] + Hj[y1][y2] + B[y2] - 3.0 * Ej);
            }
        }
        acc.ksum += px * ksum_x;
        acc.e_prod += px * Ei * Ej;
        acc.e_i += px * Ei;
        acc.e_j += px * Ej;
    }
    return acc;
}

}  // namespace detail

// Full exact report: sigma components by enumeration over the Y support with
// a common-X mixture, assembled by the delta-method formula with
// phi(x, y) = x / (2y).
inline TheoryReport exact_sigma(const JointPMF& pmf, std::size_t y_guard = 30) {
    const std::size_t ny = pmf.support_y.size();
    if (ny > y_guard)
        fail("SupportTooLarge", "|support_y| = " + std::to_string(ny) +
                                    " exceeds enumeration guard " + std::to_string(y_guard));

    const ExactMoments m = exact_moments(pmf);
    const HTables t = exact_h_tables(pmf);

    // H2 as a pair function: constant in the second argument.
    std::vector<std::vector<double>> h2pair(ny, std::vector<double>(ny));
    for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) h2pair[a][b] = t.h2[a];

    const auto a11 = detail::sigma_component_exact(pmf, t.h1, t.h1);
    const auto a22 = detail::sigma_component_exact(pmf, h2pair, h2pair);
    const auto a12 = detail::sigma_component_exact(pmf, t.h1, h2pair);

    auto assemble = [](const detail::SigmaAccum& a) {
        return a.ksum + a.e_prod - a.e_i * a.e_j;
    };

    TheoryReport r;
    r.method = "exact";
    r.mu1 = {m.mu1, 0.0};
    r.mu2 = {m.mu2, 0.0};
    r.xi = {m.xi, 0.0};
    r.xi_dss = m.xi_dss;
    r.sigma1_sq = {assemble(a11), 0.0};
    r.sigma2_sq = {assemble(a22), 0.0};
    r.sigma12 = {assemble(a12), 0.0};
    const double rho = m.mu1 / m.mu2;
    r.sigma_sq = {(r.sigma1_sq.value - 2.0 * rho * r.sigma12.value +
                   rho * rho * r.sigma2_sq.value) /
                      (4.0 * m.mu2 * m.mu2),
                  0.0};
    return r;
}

}  // namespace xicor
