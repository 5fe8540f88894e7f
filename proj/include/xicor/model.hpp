#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xicor/error.hpp"
#include "xicor/rng.hpp"

namespace xicor {

// Raw bivariate data. Construction rejects non-finite values.
struct Sample {
    std::vector<std::pair<double, double>> pairs;

    Sample() = default;
    explicit Sample(std::vector<std::pair<double, double>> p) : pairs(std::move(p)) {
        if (pairs.size() < 2) fail("TooFewRows", "sample needs at least 2 rows");
        for (const auto& [x, y] : pairs)
            if (!std::isfinite(x) || !std::isfinite(y))
                fail("NonFiniteValue", "sample contains a non-finite value");
    }

    std::size_t size() const noexcept { return pairs.size(); }
};

// Finite-support joint law of (X, Y). prob is indexed [x-index][y-index].
// Marginals and conditionals are precomputed at construction.
struct JointPMF {
    std::vector<double> support_x;
    std::vector<double> support_y;
    std::vector<std::vector<double>> prob;

    std::vector<double> px;                       // X marginal
    std::vector<double> py;                       // Y marginal
    std::vector<std::vector<double>> y_given_x;   // rows with px > 0; else uniform placeholder
};

namespace detail {

inline void check_strictly_increasing(const std::vector<double>& s, const char* which) {
    for (double v : s)
        if (!std::isfinite(v)) fail("BadParams", std::string(which) + " support has non-finite value");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i - 1] < s[i]))
            fail("BadParams", std::string(which) + " support must be strictly increasing");
}

}  // namespace detail

// Validates and finalizes a PMF. Probabilities are renormalized only when the
// total mass is within 1e-9 of one; larger deviations are rejected.
inline JointPMF make_pmf(std::vector<double> support_x, std::vector<double> support_y,
                         std::vector<std::vector<double>> prob) {
    if (support_x.empty() || support_y.empty()) fail("BadParams", "empty support");
    detail::check_strictly_increasing(support_x, "x");
    detail::check_strictly_increasing(support_y, "y");
    if (prob.size() != support_x.size()) fail("BadParams", "prob rows != |support_x|");
    double total = 0.0;
    for (const auto& row : prob) {
        if (row.size() != support_y.size()) fail("BadParams", "prob cols != |support_y|");
        for (double p : row) {
            if (!std::isfinite(p)) fail("BadParams", "non-finite probability");
            if (p < 0.0) fail("NegativeProbability", "probabilities must be >= 0");
            total += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        fail("MassNotOne", "probabilities sum to " + std::to_string(total));
    for (auto& row : prob)
        for (double& p : row) p /= total;

    JointPMF pmf;
    pmf.support_x = std::move(support_x);
    pmf.support_y = std::move(support_y);
    pmf.prob = std::move(prob);

    const std::size_t nx = pmf.support_x.size(), ny = pmf.support_y.size();
    pmf.px.assign(nx, 0.0);
    pmf.py.assign(ny, 0.0);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            pmf.px[i] += pmf.prob[i][j];
            pmf.py[j] += pmf.prob[i][j];
        }

    std::size_t y_atoms = 0;
    for (double p : pmf.py)
        if (p > 0.0) ++y_atoms;
    if (y_atoms <= 1) fail("DegenerateY", "Y marginal is a point mass");

    pmf.y_given_x.assign(nx, std::vector<double>(ny, 0.0));
    for (std::size_t i = 0; i < nx; ++i) {
        if (pmf.px[i] > 0.0) {
            for (std::size_t j = 0; j < ny; ++j) pmf.y_given_x[i][j] = pmf.prob[i][j] / pmf.px[i];
        }
    }
    return pmf;
}

// Sampling contract for bivariate models. Conditional access is part of the
// contract: every Theorem-style population quantity conditions on shared X
// values, and the conditional sampler avoids any density estimation.
class GenerativeModel {
public:
    virtual ~GenerativeModel() = default;
    virtual std::pair<double, double> sample_joint(Rng& rng) const = 0;
    virtual double sample_y_given_x(double x, Rng& rng) const = 0;
    virtual std::string descriptor() const = 0;
};

namespace detail {

inline std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    return std::min(k, cdf.size() - 1);
}

inline std::vector<double> to_cdf(const std::vector<double>& pmf) {
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;
    return cdf;
}

}  // namespace detail

// Generative view of a finite PMF via inverse-CDF lookup.
class PmfModel final : public GenerativeModel {
public:
    PmfModel(JointPMF pmf, std::string label)
        : pmf_(std::move(pmf)), label_(std::move(label)), cdf_x_(detail::to_cdf(pmf_.px)) {
        cdf_y_given_x_.reserve(pmf_.support_x.size());
        for (const auto& row : pmf_.y_given_x) cdf_y_given_x_.push_back(detail::to_cdf(row));
    }

    const JointPMF& pmf() const noexcept { return pmf_; }

    std::pair<double, double> sample_joint(Rng& rng) const override {
        const std::size_t ix = detail::sample_cdf(cdf_x_, rng);
        const std::size_t iy = detail::sample_cdf(cdf_y_given_x_[ix], rng);
        return {pmf_.support_x[ix], pmf_.support_y[iy]};
    }

    double sample_y_given_x(double x, Rng& rng) const override {
        const std::size_t ix = x_index(x);
        if (pmf_.px[ix] <= 0.0) fail("BadParams", "conditioning on zero-probability x");
        return pmf_.support_y[detail::sample_cdf(cdf_y_given_x_[ix], rng)];
    }

    std::string descriptor() const override { return label_; }

private:
    std::size_t x_index(double x) const {
        auto it = std::lower_bound(pmf_.support_x.begin(), pmf_.support_x.end(), x);
        if (it == pmf_.support_x.end() || *it != x)
            fail("BadParams", "x value not in PMF support");
        return static_cast<std::size_t>(it - pmf_.support_x.begin());
    }

    JointPMF pmf_;
    std::string label_;
    std::vector<double> cdf_x_;
    std::vector<std::vector<double>> cdf_y_given_x_;
};

// X ~ Bin(10, 1/3), Y = X/10 + U with U ~ Uniform[0,1]. The conditional pair
// law is continuous, which is the regime where H2 collapses to 1/2.
class BinomialUniformModel final : public GenerativeModel {
public:
    BinomialUniformModel(int trials, double p) : trials_(trials), p_(p) {
        std::vector<double> pmf(static_cast<std::size_t>(trials) + 1);
        for (int k = 0; k <= trials; ++k) pmf[static_cast<std::size_t>(k)] = binomial_pmf(trials, p, k);
        cdf_x_ = detail::to_cdf(pmf);
    }

    static double binomial_pmf(int n, double p, int k) {
        double v = 1.0;
        // running product keeps intermediate values well scaled
        for (int i = 1; i <= k; ++i)
            v *= p * static_cast<double>(n - k + i) / static_cast<double>(i);
        for (int i = 0; i < n - k; ++i) v *= 1.0 - p;
        return v;
    }

    std::pair<double, double> sample_joint(Rng& rng) const override {
        const double x = static_cast<double>(detail::sample_cdf(cdf_x_, rng));
        return {x, sample_y_given_x(x, rng)};
    }

    double sample_y_given_x(double x, Rng& rng) const override {
        return x / 10.0 + rng.uniform();
    }

    std::string descriptor() const override {
        return "binomial_plus_uniform(n=" + std::to_string(trials_) + ",p=" + std::to_string(p_) + ")";
    }

private:
    int trials_;
    double p_;
    std::vector<double> cdf_x_;
};

// A built model: always a generative sampler, plus the exact PMF when the law
// has finite support.
struct Model {
    std::string name;
    std::shared_ptr<const GenerativeModel> gen;
    std::optional<JointPMF> pmf;
};

inline JointPMF product_pmf(const std::vector<double>& support_x,
                            const std::vector<double>& marginal_x,
                            const std::vector<double>& support_y,
                            const std::vector<double>& marginal_y) {
    if (support_x.size() != marginal_x.size() || support_y.size() != marginal_y.size())
        fail("BadParams", "support/marginal size mismatch");
    std::vector<std::vector<double>> prob(support_x.size(),
                                          std::vector<double>(support_y.size()));
    for (std::size_t i = 0; i < support_x.size(); ++i)
        for (std::size_t j = 0; j < support_y.size(); ++j)
            prob[i][j] = marginal_x[i] * marginal_y[j];
    return make_pmf(support_x, support_y, std::move(prob));
}

inline JointPMF indep_binomial_pmf(int trials = 10, double p = 1.0 / 3.0) {
    std::vector<double> support(static_cast<std::size_t>(trials) + 1);
    std::vector<double> marg(static_cast<std::size_t>(trials) + 1);
    for (int k = 0; k <= trials; ++k) {
        support[static_cast<std::size_t>(k)] = static_cast<double>(k);
        marg[static_cast<std::size_t>(k)] = BinomialUniformModel::binomial_pmf(trials, p, k);
    }
    return product_pmf(support, marg, support, marg);
}

inline Model model_from_pmf(JointPMF pmf, std::string name) {
    Model m;
    m.name = std::move(name);
    m.pmf = pmf;
    m.gen = std::make_shared<PmfModel>(std::move(pmf), m.name);
    return m;
}

// n i.i.d. draws; identical (model, n, seed) yields bit-identical samples.
inline Sample draw_sample(const Model& model, std::size_t n, std::uint64_t seed) {
    if (n < 2) fail("BadParams", "sample size must be >= 2");
    Rng rng(seed);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pairs.push_back(model.gen->sample_joint(rng));
    return Sample(std::move(pairs));
}

}  // namespace xicor
