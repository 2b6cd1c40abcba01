#include "cuspdiv/cli.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cuspdiv/certificate.hpp"
#include "cuspdiv/csvio.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/lemma_verify.hpp"
#include "cuspdiv/solver.hpp"

namespace cuspdiv::cli {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

}  // namespace

std::vector<double> parse_eps_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.rfind("dyadic:", 0) == 0) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw std::invalid_argument("dyadic grid needs dyadic:kmin:kmax");
        grid = dyadic_eps_grid(std::stoi(parts[1]), std::stoi(parts[2]));
    } else {
        for (const std::string& f : split(text, ',')) grid.push_back(parse_double(f));
    }
    if (grid.empty()) throw std::invalid_argument("empty eps grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] < grid[i - 1]))
            throw std::invalid_argument("eps grid must be strictly decreasing");
    return grid;
}

std::vector<double> parse_alpha_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.rfind("lin:", 0) == 0) {
        const auto parts = split(text, ':');
        if (parts.size() != 4) throw std::invalid_argument("linear grid needs lin:lo:hi:count");
        const double lo = parse_double(parts[1]);
        const double hi = parse_double(parts[2]);
        const int count = std::stoi(parts[3]);
        if (count < 1) throw std::invalid_argument("alpha grid count must be >= 1");
        for (int i = 0; i < count; ++i)
            grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else {
        for (const std::string& f : split(text, ',')) grid.push_back(parse_double(f));
    }
    if (grid.empty()) throw std::invalid_argument("empty alpha grid");
    return grid;
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "family") cfg.family = value.get<std::string>();
        else if (key == "m") cfg.m = value.get<double>();
        else if (key == "N") cfg.N = value.get<int>();
        else if (key == "r") cfg.r = value.get<double>();
        else if (key == "p") cfg.p = value.get<double>();
        else if (key == "alpha") cfg.alphas = {value.get<double>()};
        else if (key == "alpha_grid") cfg.alphas = parse_alpha_grid(value.get<std::string>());
        else if (key == "eps_grid") cfg.eps_grid = parse_eps_grid(value.get<std::string>());
        else if (key == "h_rule") {
            const std::string rule = value.get<std::string>();
            if (rule.rfind("width/", 0) == 0) {
                cfg.h_width_fraction = 1.0 / parse_double(rule.substr(6));
                cfg.h_fixed = 0.0;
            } else if (rule.rfind("h=", 0) == 0) {
                cfg.h_fixed = parse_double(rule.substr(2));
            } else {
                throw std::invalid_argument("h_rule must be width/<k> or h=<value>");
            }
        }
        else if (key == "seed") cfg.seed = value.get<uint64_t>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "dump_u") cfg.dump_u = value.get<bool>();
        else if (key == "outer_tol") cfg.outer_tol = value.get<double>();
        else if (key == "inner_tol") cfg.inner_tol = value.get<double>();
        else if (key == "outer_cap") cfg.outer_cap = value.get<int>();
        else if (key == "inner_cap") cfg.inner_cap = value.get<int>();
        else throw std::invalid_argument("unknown config field: " + key);
    }
}

FamilyParams config_params(const RunConfig& cfg) {
    if (cfg.family == "poly2d") return FamilyParams::poly2d(cfg.m, cfg.p);
    if (cfg.family == "polyNd") return FamilyParams::polyNd(cfg.m, cfg.N, cfg.p);
    if (cfg.family == "log2d") return FamilyParams::log2d(cfg.r, cfg.p);
    throw std::invalid_argument("unknown family: " + cfg.family + " (poly2d|polyNd|log2d)");
}

std::vector<std::string> analyze_header() {
    return {"family", "m", "N", "r", "p", "alpha", "t1", "t2", "interval_empty",
            "classification", "rate_kind", "rate_exponent"};
}

std::vector<std::string> analyze_row(const FamilyParams& params, double alpha) {
    const ExponentReport rep = thresholds(params);
    const Classification cls = classify(params, alpha);

    std::string family, m_s, n_s, r_s;
    switch (params.family) {
        case Family::PolyCusp2D: family = "poly2d"; m_s = format_double(params.m); break;
        case Family::PolyCuspND:
            family = "polyNd";
            m_s = format_double(params.m);
            n_s = std::to_string(params.dim);
            break;
        case Family::LogCusp2D: family = "log2d"; r_s = format_double(params.r); break;
    }

    std::string rate_kind = "not_admissible";
    std::string rate_exp;
    if (cls != Classification::NotInLp) {
        const DivergenceRate rate = divergence_exponent(params, alpha);
        rate_kind = to_string(rate.kind);
        if (rate.kind == RateKind::Power || rate.kind == RateKind::LogPower)
            rate_exp = format_double(rate.exponent);
    }

    return {family,
            m_s,
            n_s,
            r_s,
            format_double(params.p),
            format_double(alpha),
            format_double(rep.t1),
            format_double(rep.t2),
            rep.interval_empty ? "true" : "false",
            to_string(cls),
            rate_kind,
            rate_exp};
}

int run_analyze(const RunConfig& cfg, std::ostream& log) {
    const FamilyParams params = config_params(cfg);
    if (cfg.alphas.empty()) throw std::invalid_argument("analyze: need --alpha or --alpha-grid");

    std::string csv = join_csv(analyze_header()) + "\n";
    for (double alpha : cfg.alphas) {
        const auto row = analyze_row(params, alpha);
        csv += join_csv(row) + "\n";
        log << row[0] << " alpha=" << row[5] << "  t1=" << row[6] << "  t2=" << row[7]
            << "  -> " << row[9];
        if (!row[11].empty()) log << " (" << row[10] << ", exponent " << row[11] << ")";
        else if (row[10] != "not_admissible") log << " (" << row[10] << ")";
        log << "\n";
    }
    if (!cfg.out.empty()) write_text_file(cfg.out, csv);
    return exit_ok;
}

int run_certificate(const RunConfig& cfg, std::ostream& log) {
    const FamilyParams params = config_params(cfg);
    if (cfg.alphas.size() != 1)
        throw std::invalid_argument("certificate: need exactly one --alpha");
    const DomainSpec domain = DomainSpec::make(params);
    const RhsSpec rhs = make_rhs(domain, cfg.alphas[0]);
    const std::vector<double> grid =
        cfg.eps_grid.empty() ? dyadic_eps_grid(4, 20) : cfg.eps_grid;

    const CertificateCurve curve = certificate_curve(rhs, params.p, grid);

    const std::string prefix = cfg.out.empty() ? "certificate" : cfg.out;
    write_certificate_csv(curve, prefix + ".csv");
    write_certificate_tsv(curve, prefix + ".tsv");
    write_text_file(prefix + ".json", certificate_sidecar(rhs, params.p, curve).dump(2) + "\n");

    log << "LB(" << format_double(grid.back()) << ") = " << format_double(curve.lb_values.back())
        << "\n";
    if (curve.verdict.diverges)
        log << "verdict: diverges (" << to_string(curve.verdict.model)
            << ", fitted rate " << format_double(curve.fitted_rate) << ")\n";
    else
        log << "verdict: converges (limit ~ " << format_double(curve.verdict.limit_estimate)
            << ")\n";
    log << "wrote " << prefix << ".csv, " << prefix << ".tsv, " << prefix << ".json\n";
    return exit_ok;
}

int run_oracle(const RunConfig& cfg, std::ostream& log) {
    const FamilyParams params = config_params(cfg);
    if (cfg.alphas.size() != 1) throw std::invalid_argument("oracle: need exactly one --alpha");
    const DomainSpec domain = DomainSpec::make(params);
    const std::vector<double> eps_list =
        cfg.eps_grid.empty() ? std::vector<double>{0.2, 0.1, 0.05} : cfg.eps_grid;

    HRule rule;
    rule.width_fraction = cfg.h_width_fraction;
    rule.fixed_h = cfg.h_fixed;
    SolveOptions opts;
    opts.outer_tol = cfg.outer_tol;
    opts.inner_tol = cfg.inner_tol;
    opts.outer_cap = cfg.outer_cap;
    opts.inner_cap = cfg.inner_cap;

    const SweepResult sweep = blowup_sweep(domain, cfg.alphas[0], eps_list, rule, opts);

    const std::string path = cfg.out.empty() ? "oracle.csv" : cfg.out;
    write_sweep_csv(sweep, path);
    for (const SweepRow& row : sweep.rows) {
        log << "eps=" << format_double(row.eps) << " h=" << format_double(row.h) << " grid="
            << row.nx << "x" << row.ny << " |grad u|=" << format_double(row.gradient_norm)
            << " sqrt(LB)=" << format_double(row.lb_sqrt) << " ratio="
            << format_double(row.ratio) << " iters=" << row.outer_iterations << " ("
            << format_double(row.seconds) << " s)\n";
    }
    log << "fitted growth rate " << format_double(sweep.fitted_rate) << "; wrote " << path << "\n";

    if (cfg.dump_u) {
        for (size_t i = 0; i < eps_list.size(); ++i) {
            const DomainSpec trunc = domain.truncate(eps_list[i]);
            const MacGrid grid = build_grid(trunc, rule.h_for(domain, eps_list[i]));
            const RhsSpec rhs = make_rhs(trunc, cfg.alphas[0]);
            const DiscreteSolveResult sol = solve_min_norm(grid, rhs, opts);
            write_velocity_dump(grid, sol, path + ".eps" + std::to_string(i) + ".u.bin");
        }
    }
    return exit_ok;
}

int run_selftest(const RunConfig& cfg, std::ostream& log) {
    const SelftestReport report = cuspdiv::run_selftest(cfg.seed, cfg.inject_kp_error);
    for (const SelftestCheck& c : report.checks) {
        log << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  worst=" << format_double(c.worst)
            << " tol=" << format_double(c.tolerance);
        if (!c.details.empty()) log << "  (" << c.details << ")";
        log << "\n";
    }
    if (!cfg.out.empty()) write_text_file(cfg.out, report.to_json().dump(2) + "\n");
    log << (report.all_passed() ? "selftest passed\n" : "selftest FAILED\n");
    return report.all_passed() ? exit_ok : exit_selftest_failure;
}

int dispatch(const RunConfig& cfg, std::ostream& log) {
    if (cfg.subcommand == "analyze") return run_analyze(cfg, log);
    if (cfg.subcommand == "certificate") return run_certificate(cfg, log);
    if (cfg.subcommand == "oracle") return run_oracle(cfg, log);
    if (cfg.subcommand == "selftest") return run_selftest(cfg, log);
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
}

}  // namespace cuspdiv::cli
