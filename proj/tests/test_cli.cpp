#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cuspdiv/cli.hpp"
#include "cuspdiv/csvio.hpp"

using namespace cuspdiv;
using cuspdiv::cli::RunConfig;

namespace {

// wrapper around the installed binary, when ctest exports its location
int run_binary(const std::string& args) {
    const char* bin = std::getenv("CUSPDIV_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("grid grammars") {
    CHECK(cli::parse_eps_grid("0.25,0.125,0.0625") == std::vector<double>{0.25, 0.125, 0.0625});
    CHECK(cli::parse_eps_grid("dyadic:4:6") == std::vector<double>{0.0625, 0.03125, 0.015625});
    CHECK_THROWS_AS(cli::parse_eps_grid("0.1,0.2"), std::invalid_argument);  // increasing
    CHECK_THROWS_AS(cli::parse_eps_grid("0.1,bogus"), std::invalid_argument);
    CHECK(cli::parse_alpha_grid("lin:-1:1:3") == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(cli::parse_alpha_grid("-1.25") == std::vector<double>{-1.25});
}

TEST_CASE("json config is merged and unknown fields are rejected") {
    RunConfig cfg;
    nlohmann::json j = {{"family", "log2d"}, {"r", 1.5}, {"p", 2.0},
                        {"alpha", 0.5},      {"seed", 99}};
    cli::apply_config_json(cfg, j);
    CHECK(cfg.family == "log2d");
    CHECK(cfg.r == 1.5);
    CHECK(cfg.alphas == std::vector<double>{0.5});
    CHECK(cfg.seed == 99);

    nlohmann::json bad = {{"famly", "poly2d"}};
    CHECK_THROWS_AS(cli::apply_config_json(cfg, bad), std::invalid_argument);

    nlohmann::json hrule = {{"h_rule", "width/8"}};
    cli::apply_config_json(cfg, hrule);
    CHECK(cfg.h_width_fraction == doctest::Approx(0.125));
    nlohmann::json hfix = {{"h_rule", "h=0.01"}};
    cli::apply_config_json(cfg, hfix);
    CHECK(cfg.h_fixed == 0.01);
    nlohmann::json hbad = {{"h_rule", "cells=12"}};
    CHECK_THROWS_AS(cli::apply_config_json(cfg, hbad), std::invalid_argument);
}

TEST_CASE("analyze rows carry the conclusion table") {
    const auto row = cli::analyze_row(FamilyParams::poly2d(2.0, 2.0), -1.25);
    CHECK(row[0] == "poly2d");
    CHECK(row[6] == "-1.5");
    CHECK(row[7] == "-0.5");
    CHECK(row[9] == "certified_nonexistence");
    CHECK(row[10] == "power");
    CHECK(row[11] == "1.5");

    const auto nd = cli::analyze_row(FamilyParams::polyNd(2.0, 3, 2.0), -1.0);
    CHECK(nd[6] == "-2.5");
    CHECK(nd[9] == "no_conclusion");

    const auto bad = cli::analyze_row(FamilyParams::poly2d(2.0, 2.0), -1.6);
    CHECK(bad[9] == "not_in_Lp");
    CHECK(bad[10] == "not_admissible");
}

TEST_CASE("run_analyze writes CSV and the exit codes are wired") {
    RunConfig cfg;
    cfg.subcommand = "analyze";
    cfg.family = "poly2d";
    cfg.m = 2.0;
    cfg.p = 2.0;
    cfg.alphas = {-1.25, 0.0};
    cfg.out = "/tmp/cuspdiv_test_analyze.csv";
    std::ostringstream log;
    CHECK(cli::dispatch(cfg, log) == cli::exit_ok);
    const std::string csv = slurp(cfg.out);
    CHECK(csv.find("family,m,N,r,p,alpha,t1,t2") == 0);
    CHECK(csv.find("certified_nonexistence") != std::string::npos);

    RunConfig none;
    none.subcommand = "frobnicate";
    CHECK_THROWS_AS(cli::dispatch(none, log), std::invalid_argument);
}

TEST_CASE("binary: exit codes") {
    CHECK(run_binary("analyze --family poly2d --m 2 --p 2 --alpha -1.25") == cli::exit_ok);
    // config errors -> exit 2
    CHECK(run_binary("analyze --family klein --m 2 --p 2 --alpha 0") ==
          cli::exit_config_error);
    CHECK(run_binary("certificate --family poly2d --m 2 --p 2 --alpha -1.25 "
                     "--eps-grid 0.1,0.2 --out /tmp/cuspdiv_cert_bad") ==
          cli::exit_config_error);
    CHECK(run_binary("analyze --family poly2d --m 2 --p 2") == cli::exit_config_error);
    // selftest: clean pass -> exit 0, fault injection -> exit 1
    CHECK(run_binary("selftest --seed 777 --out /tmp/cuspdiv_selftest.json") == cli::exit_ok);
    CHECK(run_binary("selftest --inject-kp-error --seed 3") == cli::exit_selftest_failure);
    // solver cap -> exit 3
    CHECK(run_binary("oracle --family poly2d --m 2 --p 2 --alpha -1.25 --eps-grid 0.3 "
                     "--outer-cap 1 --out /tmp/cuspdiv_oracle_cap.csv") ==
          cli::exit_non_convergence);
}

TEST_CASE("binary: identical config and seed give byte-identical outputs") {
    const std::string base =
        "certificate --family poly2d --m 2 --p 2 --alpha -1.25 --eps-grid dyadic:4:12 --seed 7";
    CHECK(run_binary(base + " --out /tmp/cuspdiv_det_a") == 0);
    CHECK(run_binary(base + " --out /tmp/cuspdiv_det_b") == 0);
    CHECK(slurp("/tmp/cuspdiv_det_a.csv") == slurp("/tmp/cuspdiv_det_b.csv"));
    CHECK(slurp("/tmp/cuspdiv_det_a.json") == slurp("/tmp/cuspdiv_det_b.json"));
    CHECK(slurp("/tmp/cuspdiv_det_a.tsv") == slurp("/tmp/cuspdiv_det_b.tsv"));
}

TEST_CASE("binary: the thread cap does not change the results") {
    const char* bin = std::getenv("CUSPDIV_BIN");
    REQUIRE(bin != nullptr);
    const std::string base = std::string(bin) +
        " oracle --family poly2d --m 2 --p 2 --alpha -1.25 --eps-grid 0.35 --seed 5";
    CHECK(std::system((base + " --out /tmp/cuspdiv_thr_a.csv > /dev/null 2>&1").c_str()) == 0);
    CHECK(std::system(("CUSPDIV_THREADS=1 " + base +
                       " --out /tmp/cuspdiv_thr_b.csv > /dev/null 2>&1")
                          .c_str()) == 0);
    CHECK(slurp("/tmp/cuspdiv_thr_a.csv") == slurp("/tmp/cuspdiv_thr_b.csv"));
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, -1.5, 3.0, 1e-300, 123456.789, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
