#ifndef CUSPDIV_CLI_HPP
#define CUSPDIV_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cuspdiv/analytic.hpp"

namespace cuspdiv::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_selftest_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_non_convergence = 3;

struct RunConfig {
    std::string subcommand;

    std::string family = "poly2d";
    double m = 2.0;
    int N = 3;
    double r = 1.0;
    double p = 2.0;

    std::vector<double> alphas;    // analyze/certificate/oracle parameter(s)
    std::vector<double> eps_grid;  // certificate grid or oracle eps list

    double h_width_fraction = 0.25;  // oracle h rule: h = fraction * width(eps)
    double h_fixed = 0.0;            // overrides the rule when > 0

    uint64_t seed = 12345;
    std::string out;
    bool dump_u = false;

    double outer_tol = 1e-8;
    double inner_tol = 1e-10;
    int outer_cap = 2000;
    int inner_cap = 800;
    bool inject_kp_error = false;  // selftest fault-injection hook
};

// Applies a JSON config document onto the defaults; unknown keys are
// rejected (std::invalid_argument).
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

// Grid grammars: "0.25,0.125,0.0625", "dyadic:4:20"; alpha grids additionally
// "lin:lo:hi:count".
std::vector<double> parse_eps_grid(const std::string& text);
std::vector<double> parse_alpha_grid(const std::string& text);

FamilyParams config_params(const RunConfig& cfg);

// One analyze table row (header in analyze_header()); kept separate from the
// command so tests can pin the exact values the CLI reports.
std::vector<std::string> analyze_header();
std::vector<std::string> analyze_row(const FamilyParams& params, double alpha);

int run_analyze(const RunConfig& cfg, std::ostream& log);
int run_certificate(const RunConfig& cfg, std::ostream& log);
int run_oracle(const RunConfig& cfg, std::ostream& log);
int run_selftest(const RunConfig& cfg, std::ostream& log);

int dispatch(const RunConfig& cfg, std::ostream& log);

}  // namespace cuspdiv::cli

#endif
