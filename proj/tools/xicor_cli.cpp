// xicor: Chatterjee rank correlation, limiting-variance theory, and CLT
// verification experiments. All stochastic subcommands take an explicit seed
// (default 0) and echo it, so identical invocations give identical reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xicor/io.hpp"
#include "xicor/mc.hpp"

namespace {

void emit(const xicor::json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) xicor::fail("ParseError", "cannot write " + out_path);
        out << report.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chatterjee rank correlation toolkit"};
    app.require_subcommand(1);

    std::string input, model_path, out_path, hist_path, method = "plugin", kernel_name = "h1";
    std::uint64_t seed = 0;
    std::size_t n = 2000, reps = 2000, m = 0, B = 500, outer = 10000, inner = 1000;
    double level = 0.9;
    bool force_mc = false;

    auto* cmd_xi = app.add_subcommand("xi", "compute xi_n from a CSV sample");
    cmd_xi->add_option("--input", input, "two-column CSV")->required();
    cmd_xi->add_option("--seed", seed, "tie-break seed");
    cmd_xi->add_option("--out", out_path, "output JSON path (default stdout)");

    auto* cmd_dec = app.add_subcommand("decompose", "xi_n algebraic decomposition (debug)");
    cmd_dec->add_option("--input", input)->required();
    cmd_dec->add_option("--seed", seed);
    cmd_dec->add_option("--out", out_path);

    auto* cmd_theory = app.add_subcommand("theory", "population quantities of the limiting law");
    cmd_theory->add_option("--model", model_path, "model spec JSON")->required();
    cmd_theory->add_flag("--mc", force_mc, "force Monte Carlo even when a PMF is available");
    cmd_theory->add_option("--outer", outer);
    cmd_theory->add_option("--inner", inner);
    cmd_theory->add_option("--seed", seed);
    cmd_theory->add_option("--out", out_path);

    auto* cmd_ci = app.add_subcommand("ci", "confidence interval for xi");
    cmd_ci->add_option("--input", input)->required();
    cmd_ci->add_option("--method", method)->check(CLI::IsMember({"plugin", "bootstrap"}));
    cmd_ci->add_option("--m", m, "bootstrap resample size (0 = ceil(n^(2/3)))");
    cmd_ci->add_option("--B", B, "bootstrap replicates");
    cmd_ci->add_option("--level", level);
    cmd_ci->add_option("--seed", seed);
    cmd_ci->add_option("--out", out_path);

    auto* cmd_sim = app.add_subcommand("simulate", "CLT verification experiment");
    cmd_sim->add_option("--model", model_path)->required();
    cmd_sim->add_option("--n", n, "sample size per replicate");
    cmd_sim->add_option("--reps", reps, "number of replicates");
    cmd_sim->add_option("--seed", seed);
    cmd_sim->add_option("--out", out_path, "result JSON path");
    cmd_sim->add_option("--hist", hist_path, "histogram CSV path");
    cmd_sim->add_option("--outer", outer, "MC theory outer replicates");
    cmd_sim->add_option("--inner", inner, "MC theory inner batch size");

    auto* cmd_vm = app.add_subcommand("vstat-moments", "mu_h and sigma_h^2 for a builtin kernel");
    cmd_vm->add_option("--model", model_path)->required();
    cmd_vm->add_option("--kernel", kernel_name)->check(CLI::IsMember({"h1", "h2"}));
    cmd_vm->add_option("--outer", outer);
    cmd_vm->add_option("--inner", inner);
    cmd_vm->add_option("--seed", seed);
    cmd_vm->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_xi) {
            const xicor::Sample s = xicor::ingest_csv(input);
            emit({{"xi_n", xicor::xi_n(s, seed)}, {"n", s.size()}, {"seed", seed}}, out_path);
        } else if (*cmd_dec) {
            const xicor::Sample s = xicor::ingest_csv(input);
            auto d = xicor::decompose_xi(xicor::reorder_by_x(s, seed));
            auto j = xicor::to_json(d);
            j["seed"] = seed;
            emit(j, out_path);
        } else if (*cmd_theory) {
            const xicor::Model model = xicor::load_model(model_path);
            xicor::TheoryReport r;
            if (model.pmf && !force_mc) {
                r = xicor::exact_sigma(*model.pmf);
            } else {
                r = xicor::mc_theory(*model.gen, outer, inner, seed);
            }
            auto j = xicor::to_json(r);
            j["model"] = model.name;
            if (r.method == "monte_carlo") j["seed"] = seed;
            emit(j, out_path);
        } else if (*cmd_ci) {
            const xicor::Sample s = xicor::ingest_csv(input);
            const xicor::CIResult ci = method == "plugin"
                                           ? xicor::normal_ci(s, level, seed)
                                           : xicor::moon_bootstrap_ci(s, m, B, level, seed);
            auto j = xicor::to_json(ci);
            j["seed"] = seed;
            emit(j, out_path);
        } else if (*cmd_sim) {
            const xicor::Model model = xicor::load_model(model_path);
            const xicor::SimResult r =
                xicor::run_clt_experiment(model, n, reps, seed, outer, inner);
            emit(xicor::to_json(r), out_path);
            if (!hist_path.empty()) {
                std::ofstream hist(hist_path);
                if (!hist) xicor::fail("ParseError", "cannot write " + hist_path);
                xicor::write_histogram_csv(r.histogram, hist);
            }
        } else if (*cmd_vm) {
            const xicor::Model model = xicor::load_model(model_path);
            const xicor::PairKernel kernel =
                kernel_name == "h1" ? xicor::h1_kernel() : xicor::h2_lifted_kernel();
            const auto vm =
                xicor::general_vstat_moments(kernel, *model.gen, outer, inner, seed);
            emit({{"kernel", kernel_name},
                  {"model", model.name},
                  {"mu_h", xicor::to_json(vm.mu_h)},
                  {"sigma_h_sq", xicor::to_json(vm.sigma_h_sq)},
                  {"seed", seed}},
                 out_path);
        }
    } catch (const xicor::Error& e) {
        std::cerr << e.name() << ": " << e.what() << std::endl;
        const bool usage = e.name() == "ParseError" || e.name() == "TooFewRows" ||
                           e.name() == "NonFiniteValue" || e.name() == "BadParams" ||
                           e.name() == "UnknownModel";
        return usage ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
