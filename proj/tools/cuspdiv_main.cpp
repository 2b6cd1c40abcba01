#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cuspdiv/cli.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/threads.hpp"

namespace {

// --config is applied before the remaining flags so that flags win.
void preload_config(int argc, char** argv, cuspdiv::cli::RunConfig& cfg) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
        if (path.empty()) continue;
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open config file: " + path);
        nlohmann::json j;
        f >> j;
        cuspdiv::cli::apply_config_json(cfg, j);
    }
}

void add_common_flags(CLI::App* cmd, cuspdiv::cli::RunConfig& cfg, double& alpha_opt,
                      std::string& alpha_grid, std::string& eps_grid, std::string& h_rule,
                      std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags win on conflict)");
    cmd->add_option("--family", cfg.family, "poly2d | polyNd | log2d");
    cmd->add_option("--m", cfg.m, "cusp power (poly families)");
    cmd->add_option("--N", cfg.N, "space dimension (polyNd)");
    cmd->add_option("--r", cfg.r, "log exponent (log2d)");
    cmd->add_option("--p", cfg.p, "Lebesgue exponent in (1, inf)");
    cmd->add_option("--alpha", alpha_opt, "right-hand-side exponent alpha");
    cmd->add_option("--alpha-grid", alpha_grid, "comma list or lin:lo:hi:count");
    cmd->add_option("--eps-grid", eps_grid, "comma list or dyadic:kmin:kmax (decreasing)");
    cmd->add_option("--h-rule", h_rule, "width/<k> (default width/4) or h=<value>");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--out", cfg.out, "output path (or prefix for multi-file outputs)");
    cmd->add_option("--outer-tol", cfg.outer_tol, "pressure iteration relative tolerance");
    cmd->add_option("--inner-tol", cfg.inner_tol, "component solve relative tolerance");
    cmd->add_option("--outer-cap", cfg.outer_cap, "pressure iteration cap");
    cmd->add_option("--inner-cap", cfg.inner_cap, "component solve iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
    cuspdiv::apply_thread_cap();

    cuspdiv::cli::RunConfig cfg;
    try {
        preload_config(argc, argv, cfg);
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return cuspdiv::cli::exit_config_error;
    }

    CLI::App app{"divergence-equation solvability analyzer for cusp domains"};
    app.require_subcommand(1);

    std::string alpha_grid, eps_grid, h_rule, config_path;
    double alpha_opt = std::numeric_limits<double>::quiet_NaN();
    bool dump_u = false, inject_kp = false;

    CLI::App* analyze = app.add_subcommand("analyze", "threshold table and classification");
    CLI::App* certificate =
        app.add_subcommand("certificate", "lower-bound curve LB(eps) and blow-up rate");
    CLI::App* oracle = app.add_subcommand("oracle", "discrete minimal-norm sweep (p = 2)");
    CLI::App* selftest = app.add_subcommand("selftest", "lemma and invariant verification suite");

    for (CLI::App* cmd : {analyze, certificate, oracle, selftest})
        add_common_flags(cmd, cfg, alpha_opt, alpha_grid, eps_grid, h_rule, config_path);
    oracle->add_flag("--dump-u", dump_u, "write binary velocity dumps");
    selftest->add_flag("--inject-kp-error", inject_kp, "fault-injection hook (must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return cuspdiv::cli::exit_config_error;
    }

    try {
        if (!std::isnan(alpha_opt)) cfg.alphas = {alpha_opt};
        if (!alpha_grid.empty()) cfg.alphas = cuspdiv::cli::parse_alpha_grid(alpha_grid);
        if (!eps_grid.empty()) cfg.eps_grid = cuspdiv::cli::parse_eps_grid(eps_grid);
        if (!h_rule.empty()) {
            nlohmann::json j;
            j["h_rule"] = h_rule;
            cuspdiv::cli::apply_config_json(cfg, j);
        }
        cfg.dump_u = dump_u;
        cfg.inject_kp_error = inject_kp;
        cfg.subcommand = app.get_subcommands().front()->get_name();
        return cuspdiv::cli::dispatch(cfg, std::cout);
    } catch (const cuspdiv::NonConvergenceError& ex) {
        std::cerr << "solver did not converge: " << ex.what() << " (residual "
                  << ex.residual << " after " << ex.iterations << " iterations)\n";
        return cuspdiv::cli::exit_non_convergence;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return cuspdiv::cli::exit_config_error;
    } catch (const std::domain_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return cuspdiv::cli::exit_config_error;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    }
}
