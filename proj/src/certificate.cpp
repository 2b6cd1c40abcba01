#include "cuspdiv/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cuspdiv/csvio.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/quadrature.hpp"
#include "cuspdiv/ratefit.hpp"

namespace cuspdiv {
namespace {

double section_coef(const FamilyParams& fp) {
    return fp.dim == 2 ? 2.0 : unit_ball_volume(fp.dim - 1);
}

void require_admissible(const RhsSpec& rhs) {
    const ExponentReport rep = thresholds(rhs.domain.params());
    if (!(rhs.alpha > rep.t1))
        throw NotAdmissibleError("alpha <= t1: cumulative flux requires f in L^p");
}

// Weight exponent of x for the L^p estimate with exponent p_est (the family's
// stored p only enters through the rhs formulas).
double weight_exponent_for(const FamilyParams& fp, double p_est) {
    switch (fp.family) {
        case Family::PolyCusp2D:
            return fp.m * (2.0 * p_est - 1.0) / p_est;
        case Family::PolyCuspND:
            if (fp.dim == 2) return fp.m * (2.0 * p_est - 1.0) / p_est;
            return (fp.m * (2.0 * p_est - 1.0) + fp.m * (p_est - 1.0) * (fp.dim - 2)) / p_est;
        case Family::LogCusp2D:
            return (2.0 * p_est - 1.0) / p_est;
    }
    return 0.0;
}

// Shifted tail integral V(T) = int_0^U e^{-c s} (T + s)^delta ds with
// U = T_cut - T (infinite when the domain is not truncated), so that
// A(x) = 2 * scale * e^{-c T} * V(T) at T = -ln x.  No endpoint cancellation
// for any T.
double log_flux_tail(const DomainSpec& dom, double delta, double T) {
    const double c = 2.0 - 2.0 / dom.params().p;
    auto g = [=](double s) { return std::exp(-c * s) * std::pow(T + s, delta); };
    if (dom.cut() > 0.0) {
        const double U = -std::log(dom.cut()) - T;
        if (U <= 0.0) return 0.0;
        return quad::integrate_or_throw(g, 0.0, U, 1e-12);
    }
    quad::Result res = quad::integrate_exp_tail(g, 0.0, c, 1e-12);
    if (!res.converged) throw QuadratureError("cumulative flux tail quadrature failed");
    return res.value;
}

}  // namespace

double flux(const RhsSpec& rhs, double x) {
    const DomainSpec& dom = rhs.domain;
    if (!(x > dom.cut() && x < dom.x_max()))
        throw std::domain_error("flux: x outside the (truncated) cusp range");
    return rhs.cusp_value(x) * dom.cross_section_measure(x);
}

double cumulative_flux(const RhsSpec& rhs, double x) {
    require_admissible(rhs);
    const DomainSpec& dom = rhs.domain;
    const FamilyParams& fp = dom.params();
    if (!(x >= dom.cut() && x <= dom.x_max()))
        throw std::domain_error("cumulative_flux: x outside the (truncated) cusp range");
    if (x == dom.cut()) return 0.0;

    if (fp.family == Family::LogCusp2D) {
        const double delta = -1.0 / fp.p - rhs.alpha - fp.r;
        const double T = -std::log(x);
        const double c = 2.0 - 2.0 / fp.p;
        return 2.0 * rhs.scale * std::exp(-c * T) * log_flux_tail(dom, delta, T);
    }

    const double q = fp.m * (fp.dim - 1);
    const double kappa = rhs.alpha + q + 1.0;  // > 0 for admissible alpha
    const double c_a = rhs.scale * section_coef(fp) / kappa;
    const double base = dom.cut() > 0.0 ? std::pow(dom.cut(), kappa) : 0.0;
    return c_a * (std::pow(x, kappa) - base);
}

double cumulative_flux_asymptotic(const RhsSpec& rhs, double x) {
    const FamilyParams& fp = rhs.domain.params();
    if (fp.family != Family::LogCusp2D)
        throw std::invalid_argument("cumulative_flux_asymptotic: log family only");
    const double p = fp.p;
    const double delta = -1.0 / p - rhs.alpha - fp.r;
    // A(x) ~ 2 * (p / (2(p-1))) * x^{2 - 2/p} (-ln x)^{delta}.
    return rhs.scale * (p / (p - 1.0)) * std::pow(x, 2.0 - 2.0 / p) *
           std::pow(-std::log(x), delta);
}

double certificate_constant(const FamilyParams& params, double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("certificate_constant: p must be in (1, inf)");
    if (params.family != Family::PolyCuspND || params.dim == 2) return hoelder_constant(p);

    // ||h(1, .)||_{p'} over the unit cross-section ball, h = sqrt(1 - |y|^2) - tau:
    // K^{p'} = 2^{p'+1}/(p'+1) * int_{unit (N-2)-ball} (1 - |y|^2)^{(p'+1)/2} dy.
    const double pp = p / (p - 1.0);
    const int k = params.dim - 2;
    double ball_integral;
    if (k == 0) {
        ball_integral = 1.0;
    } else {
        const double surface = k * unit_ball_volume(k);
        ball_integral = surface * quad::integrate_or_throw(
                                      [=](double rho) {
                                          return std::pow(rho, k - 1) *
                                                 std::pow(1.0 - rho * rho, 0.5 * (pp + 1.0));
                                      },
                                      0.0, 1.0, 1e-12);
    }
    return std::pow(std::pow(2.0, pp + 1.0) / (pp + 1.0) * ball_integral, 1.0 / pp);
}

double lower_bound(const RhsSpec& rhs, double p, double eps) {
    require_admissible(rhs);
    const DomainSpec& dom = rhs.domain;
    const FamilyParams& fp = dom.params();
    const double x_max = dom.x_max();
    if (!(eps > 0.0 && eps <= x_max))
        throw std::domain_error("lower_bound: eps outside (0, x_max]");
    if (dom.cut() > 0.0 && eps < dom.cut())
        throw std::domain_error("lower_bound: eps below the domain cut");
    if (eps == x_max) return 0.0;

    const double K = certificate_constant(fp, p);
    const double k_pow = std::pow(K, -p);

    if (fp.family == Family::LogCusp2D) {
        const double pf = fp.p;
        const double delta = -1.0 / pf - rhs.alpha - fp.r;
        const double gamma = 2.0 * p / pf - 2.0;  // 0 when p == pf
        // w(x)^p = x^{2p-1} (-ln x)^{-r(2p-1)}; in t = -ln x the integrand of
        // LB is |2 scale V(t)|^p e^{gamma t} t^{r(2p-1)} dt.
        auto integrand = [&](double t) {
            const double v = log_flux_tail(dom, delta, t);
            return std::pow(std::abs(2.0 * rhs.scale * v), p) * std::exp(gamma * t) *
                   std::pow(t, fp.r * (2.0 * p - 1.0));
        };
        const double T_lo = -std::log(x_max);
        const double T_hi = -std::log(eps);
        return k_pow * quad::integrate_or_throw(integrand, T_lo, T_hi, 1e-10);
    }

    const double q = fp.m * (fp.dim - 1);
    const double kappa = rhs.alpha + q + 1.0;
    const double c_a = rhs.scale * section_coef(fp) / kappa;
    const double w_exp = weight_exponent_for(fp, p);

    if (dom.cut() == 0.0) {
        const double e = p * kappa - p * w_exp;  // = certificate_integrand_exponent at p == fp.p
        const double tail = (e == -1.0)
                                ? std::log(x_max / eps)
                                : (std::pow(x_max, e + 1.0) - std::pow(eps, e + 1.0)) / (e + 1.0);
        return k_pow * std::pow(std::abs(c_a), p) * tail;
    }

    const double base = std::pow(dom.cut(), kappa);
    auto integrand = [&](double x) {
        const double a = c_a * (std::pow(x, kappa) - base);
        if (a == 0.0) return 0.0;
        return std::pow(std::abs(a) / std::pow(x, w_exp), p);
    };
    return k_pow * quad::integrate_or_throw(integrand, eps, x_max, 1e-10);
}

double lower_bound_from_A(const DomainSpec& domain, double p,
                          const std::function<double(double)>& A, double eps) {
    const FamilyParams& fp = domain.params();
    const double K = certificate_constant(fp, p);
    auto integrand = [&](double x) {
        const double a = A(x);
        if (a == 0.0) return 0.0;
        return std::pow(std::abs(a) / hoelder_weight(fp, x), p);
    };
    const double val = quad::integrate_or_throw(integrand, eps, domain.x_max(), 1e-9);
    return std::pow(K, -p) * val;
}

std::vector<double> dyadic_eps_grid(int k_min, int k_max) {
    if (k_min >= k_max) throw std::invalid_argument("dyadic_eps_grid: need k_min < k_max");
    std::vector<double> grid;
    for (int k = k_min; k <= k_max; ++k) grid.push_back(std::ldexp(1.0, -k));
    return grid;
}

CertificateCurve certificate_curve(const RhsSpec& rhs, double p,
                                   const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 2)
        throw std::invalid_argument("certificate_curve: need at least two eps values");
    const double x_max = rhs.domain.x_max();
    for (size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] < x_max))
            throw std::invalid_argument("certificate_curve: eps values must lie in (0, x_max)");
        if (i && !(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("certificate_curve: eps grid must be strictly decreasing");
    }

    CertificateCurve curve;
    curve.eps_grid = eps_grid;
    curve.lb_values.assign(eps_grid.size(), 0.0);

    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(eps_grid.size()); ++i) {
        try {
            curve.lb_values[i] = lower_bound(rhs, p, eps_grid[i]);
        } catch (const std::exception& ex) {
#pragma omp critical
            error = ex.what();
        }
    }
    if (!error.empty()) throw std::runtime_error("certificate_curve: " + error);

    for (size_t i = 1; i < curve.lb_values.size(); ++i) {
        const double prev = curve.lb_values[i - 1];
        const double curr = curve.lb_values[i];
        if (curr < prev * (1.0 - 1e-9) - 1e-300)
            throw std::logic_error("certificate_curve: LB must be nondecreasing as eps decreases");
    }

    const size_t n = eps_grid.size();
    const double lb_last = curve.lb_values[n - 1];

    if (lb_last > 0.0) {
        // Fit window: the smallest decade of eps (at least 3 points).
        size_t start = 0;
        while (start < n && eps_grid[start] > 10.0 * eps_grid[n - 1]) ++start;
        if (n - start < 3) start = n >= 4 ? n - 4 : 0;
        std::vector<double> ew(eps_grid.begin() + start, eps_grid.end());
        std::vector<double> lw(curve.lb_values.begin() + start, curve.lb_values.end());

        const LinearFit power = fit_loglog(ew, lw);
        curve.fitted_rate = -power.slope;
        curve.power_residual = power.rms_residual;

        std::vector<double> lx(ew.size());
        for (size_t i = 0; i < ew.size(); ++i) lx[i] = std::log(1.0 / ew[i]);
        const LinearFit logfit = fit_linear(lx, lw);
        double mean = 0.0;
        for (double v : lw) mean += std::abs(v);
        mean /= static_cast<double>(lw.size());
        curve.log_residual = mean > 0.0 ? logfit.rms_residual / mean : 0.0;
    }

    const double prev = curve.lb_values[n - 2];
    const double rel_change = lb_last > 0.0 ? std::abs(lb_last - prev) / lb_last : 0.0;
    if (rel_change < 1e-3) {
        curve.verdict.diverges = false;
        curve.verdict.model = RateKind::Convergent;
        curve.verdict.limit_estimate = lb_last;
    } else {
        curve.verdict.diverges = true;
        curve.verdict.model =
            curve.power_residual <= curve.log_residual ? RateKind::Power : RateKind::Logarithmic;
        curve.verdict.rate = curve.fitted_rate;
    }
    return curve;
}

void write_certificate_csv(const CertificateCurve& curve, const std::string& path) {
    std::string out = "epsilon,lower_bound\n";
    for (size_t i = 0; i < curve.eps_grid.size(); ++i) {
        out += format_double(curve.eps_grid[i]);
        out.push_back(',');
        out += format_double(curve.lb_values[i]);
        out.push_back('\n');
    }
    write_text_file(path, out);
}

void write_certificate_tsv(const CertificateCurve& curve, const std::string& path) {
    std::string out = "# epsilon\tlower_bound\n";
    for (size_t i = 0; i < curve.eps_grid.size(); ++i) {
        out += format_double(curve.eps_grid[i]);
        out.push_back('\t');
        out += format_double(curve.lb_values[i]);
        out.push_back('\n');
    }
    write_text_file(path, out);
}

nlohmann::json certificate_sidecar(const RhsSpec& rhs, double p, const CertificateCurve& curve) {
    nlohmann::json j;
    j["rhs"] = rhs.to_json();
    j["p"] = p;
    j["n_points"] = curve.eps_grid.size();
    j["eps_max"] = curve.eps_grid.front();
    j["eps_min"] = curve.eps_grid.back();
    j["fitted_rate"] = curve.fitted_rate;
    j["power_residual"] = curve.power_residual;
    j["log_residual"] = curve.log_residual;
    j["verdict"]["diverges"] = curve.verdict.diverges;
    j["verdict"]["model"] = to_string(curve.verdict.model);
    j["verdict"]["rate"] = curve.verdict.rate;
    j["verdict"]["limit_estimate"] = curve.verdict.limit_estimate;
    return j;
}

}  // namespace cuspdiv
