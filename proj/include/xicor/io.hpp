#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xicor/error.hpp"
#include "xicor/exact.hpp"
#include "xicor/inference.hpp"
#include "xicor/kernels.hpp"
#include "xicor/model.hpp"
#include "xicor/sim.hpp"

namespace xicor {

using json = nlohmann::json;

namespace detail {

inline bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

}  // namespace detail

// Two numeric comma-separated columns; a non-numeric first line is treated as
// a header. Errors report the offending row.
inline Sample ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("ParseError", "cannot open " + path);
    std::vector<std::pair<double, double>> pairs;
    std::string line;
    std::size_t row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
            if (first) { first = false; continue; }  // header without comma is unusual but harmless
            fail("ParseError", "row " + std::to_string(row) + ": expected two comma-separated columns");
        }
        if (std::getline(ls, extra, ','))
            fail("ParseError", "row " + std::to_string(row) + ": more than two columns");
        double x, y;
        if (!detail::parse_double(a, x) || !detail::parse_double(b, y)) {
            if (first) { first = false; continue; }  // auto-detected header
            fail("ParseError", "row " + std::to_string(row) + ": non-numeric value");
        }
        first = false;
        if (!std::isfinite(x) || !std::isfinite(y))
            fail("NonFiniteValue", "row " + std::to_string(row) + ": non-finite value");
        pairs.emplace_back(x, y);
    }
    if (pairs.size() < 2) fail("TooFewRows", "need at least 2 data rows");
    return Sample(std::move(pairs));
}

inline JointPMF pmf_from_json(const json& j) {
    if (!j.contains("support_x") || !j.contains("support_y") || !j.contains("prob"))
        fail("BadParams", "pmf spec needs support_x, support_y, prob");
    return make_pmf(j.at("support_x").get<std::vector<double>>(),
                    j.at("support_y").get<std::vector<double>>(),
                    j.at("prob").get<std::vector<std::vector<double>>>());
}

// Builtin model dispatch. indep_binomial and product_pmf carry an exact PMF
// alongside the sampler; binomial_plus_uniform is generative only.
inline Model builtin_model(const std::string& name, const json& params) {
    if (name == "indep_binomial") {
        const int trials = params.value("trials", 10);
        const double p = params.value("p", 1.0 / 3.0);
        if (trials < 1 || !(p > 0.0 && p < 1.0)) fail("BadParams", "indep_binomial needs trials >= 1, p in (0,1)");
        return model_from_pmf(indep_binomial_pmf(trials, p), "indep_binomial");
    }
    if (name == "binomial_plus_uniform") {
        const int trials = params.value("trials", 10);
        const double p = params.value("p", 1.0 / 3.0);
        if (trials < 1 || !(p > 0.0 && p < 1.0)) fail("BadParams", "binomial_plus_uniform needs trials >= 1, p in (0,1)");
        Model m;
        m.name = "binomial_plus_uniform";
        m.gen = std::make_shared<BinomialUniformModel>(trials, p);
        return m;
    }
    if (name == "product_pmf") {
        auto marg_x = params.at("marginal_x").get<std::vector<double>>();
        auto marg_y = params.at("marginal_y").get<std::vector<double>>();
        std::vector<double> sx, sy;
        if (params.contains("support_x")) sx = params.at("support_x").get<std::vector<double>>();
        else for (std::size_t i = 0; i < marg_x.size(); ++i) sx.push_back(static_cast<double>(i));
        if (params.contains("support_y")) sy = params.at("support_y").get<std::vector<double>>();
        else for (std::size_t i = 0; i < marg_y.size(); ++i) sy.push_back(static_cast<double>(i));
        return model_from_pmf(product_pmf(sx, marg_x, sy, marg_y), "product_pmf");
    }
    if (name == "custom_pmf") {
        return model_from_pmf(pmf_from_json(params.contains("pmf") ? params.at("pmf") : params),
                              "custom_pmf");
    }
    fail("UnknownModel", "unknown model: " + name);
}

// Model spec file: {"name": ..., "params": {...}} or {"pmf": {...}}.
inline Model parse_model_spec(const json& spec) {
    if (spec.contains("pmf")) return model_from_pmf(pmf_from_json(spec.at("pmf")), "custom_pmf");
    if (!spec.contains("name")) fail("BadParams", "model spec needs \"name\" or \"pmf\"");
    return builtin_model(spec.at("name").get<std::string>(),
                         spec.value("params", json::object()));
}

inline Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("ParseError", "cannot open " + path);
    json spec;
    try {
        in >> spec;
    } catch (const json::exception& e) {
        fail("ParseError", std::string("model spec: ") + e.what());
    }
    return parse_model_spec(spec);
}

inline json to_json(const ValueSE& v) {
    json j{{"value", v.value}};
    if (v.se > 0.0) j["se"] = v.se;
    return j;
}

inline json to_json(const TheoryReport& r) {
    json j{{"method", r.method},
           {"mu1", to_json(r.mu1)},
           {"mu2", to_json(r.mu2)},
           {"sigma1_sq", to_json(r.sigma1_sq)},
           {"sigma2_sq", to_json(r.sigma2_sq)},
           {"sigma12", to_json(r.sigma12)},
           {"sigma_sq", to_json(r.sigma_sq)},
           {"xi", to_json(r.xi)}};
    if (!std::isnan(r.xi_dss)) j["xi_dss"] = r.xi_dss;
    return j;
}

inline json to_json(const CIResult& ci) {
    json j{{"point", ci.point}, {"lower", ci.lower}, {"upper", ci.upper},
           {"level", ci.level}, {"method", ci.method}};
    if (ci.method == "moon_bootstrap") {
        j["m"] = ci.m;
        j["B"] = ci.B;
    } else {
        j["sigma_hat_sq"] = ci.sigma_hat_sq;
    }
    return j;
}

inline json to_json(const XiDecomposition& d) {
    return json{{"num_direct", d.num_direct},
                {"num_kernel", d.num_kernel},
                {"den_direct", static_cast<double>(d.den_direct)},
                {"den_kernel", static_cast<double>(d.den_kernel)},
                {"den_equal", d.den_equal},
                {"v_h1", d.v_h1},
                {"v_h2", d.v_h2},
                {"xi_n", d.xi},
                {"residual", d.residual}};
}

inline json to_json(const Histogram& h) {
    return json{{"edges", h.edges}, {"counts", h.counts}};
}

inline json to_json(const SimResult& r) {
    return json{{"model", r.model_name},
                {"n", r.n},
                {"reps", r.reps},
                {"seed", r.seed},
                {"xi_theory", r.xi_theory},
                {"sigma_sq_theory", r.sigma_sq_theory},
                {"theory_method", r.theory_method},
                {"zero_sigma", r.zero_sigma},
                {"ks_distance", r.ks_distance},
                {"histogram", to_json(r.histogram)},
                {"draws", r.draws}};
}

inline void write_histogram_csv(const Histogram& h, std::ostream& out) {
    out << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << json(h.edges[i]).dump() << ',' << json(h.edges[i + 1]).dump() << ','
            << h.counts[i] << '\n';
}

}  // namespace xicor
