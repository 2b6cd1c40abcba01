#include "cuspdiv/lemma_verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cuspdiv/certificate.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/quadrature.hpp"
#include "cuspdiv/rhs.hpp"
#include "cuspdiv/rng.hpp"

namespace cuspdiv {

SyntheticField::SyntheticField(const DomainSpec& dom, double lo, double hi, double amp)
    : domain(dom), x_lo(lo), x_hi(hi), amplitude(amp) {
    if (!(0.0 < lo && lo < hi && hi < dom.x_max()))
        throw std::invalid_argument("SyntheticField: support must satisfy 0 < x_lo < x_hi < x_max");
}

double SyntheticField::bump(double x) const {
    const double s = (2.0 * x - (x_lo + x_hi)) / (x_hi - x_lo);
    if (!(std::abs(s) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

double SyntheticField::bump_derivative(double x) const {
    const double s = (2.0 * x - (x_lo + x_hi)) / (x_hi - x_lo);
    if (!(std::abs(s) < 1.0)) return 0.0;
    const double om = 1.0 - s * s;
    return bump(x) * (-2.0 * s / (om * om)) * (2.0 / (x_hi - x_lo));
}

double SyntheticField::value(double x, double y) const {
    const double phi = bump(x);
    if (phi == 0.0) return 0.0;
    const double w = domain.width(x);
    const double q = w * w - y * y;
    if (q <= 0.0) return 0.0;
    return amplitude * q * q * phi;
}

double SyntheticField::du_dx(double x, double y) const {
    const double phi = bump(x);
    if (phi == 0.0) return 0.0;
    const double w = domain.width(x);
    const double q = w * w - y * y;
    if (q <= 0.0) return 0.0;
    const double dw = domain.width_derivative(x);
    return amplitude * (4.0 * q * w * dw * phi + q * q * bump_derivative(x));
}

double SyntheticField::du_dy(double x, double y) const {
    const double phi = bump(x);
    if (phi == 0.0) return 0.0;
    const double w = domain.width(x);
    const double q = w * w - y * y;
    if (q <= 0.0) return 0.0;
    return amplitude * (-4.0 * y * q) * phi;
}

double SyntheticField::cross_section_integral(double x) const {
    if (bump(x) == 0.0) return 0.0;
    const double w = domain.width(x);
    return quad::integrate_or_throw([this, x](double y) { return value(x, y); }, -w, w, 1e-12);
}

double SyntheticField::cross_section_integral_closed(double x) const {
    const double phi = bump(x);
    if (phi == 0.0) return 0.0;
    const double w = domain.width(x);
    return amplitude * (16.0 / 15.0) * std::pow(w, 5.0) * phi;
}

double SyntheticField::max_abs() const {
    // |u1| <= amplitude * w(x_hi)^4; the bump factor is at most 1.
    const double w = domain.width(x_hi);
    return std::abs(amplitude) * w * w * w * w;
}

double check_weak_derivative(const SyntheticField& field, const std::vector<double>& x_samples) {
    double worst = 0.0;
    for (double x : x_samples) {
        auto a_of = [&field](double t) { return field.cross_section_integral(t); };
        // Richardson-extrapolated central differences, two levels.
        const double h0 = 4e-3 * std::max(field.x_hi - field.x_lo, 0.1);
        auto central = [&](double h) { return (a_of(x + h) - a_of(x - h)) / (2.0 * h); };
        const double d1 = central(h0);
        const double d2 = central(0.5 * h0);
        const double d3 = central(0.25 * h0);
        const double r1 = (4.0 * d2 - d1) / 3.0;
        const double r2 = (4.0 * d3 - d2) / 3.0;
        const double lhs = (16.0 * r2 - r1) / 15.0;

        double rhs = 0.0;
        if (x > 0.0 && x < field.domain.x_max()) {
            const double w = field.domain.width(x);
            rhs = quad::integrate_or_throw([&field, x](double y) { return field.du_dx(x, y); },
                                           -w, w, 1e-12);
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

bool check_limit_zero(const SyntheticField& field) {
    const double tol = 1e-10 * (1.0 + field.max_abs());
    double x = field.x_lo;
    for (int k = 0; k < 40 && x > 1e-14; ++k) {
        x *= 0.5;
        const double a = field.cross_section_integral(x);
        if (!(std::abs(a) < tol)) return false;
    }
    return true;
}

double check_hoelder_identity(double m, double p, const std::vector<double>& x_samples,
                              double kp_factor) {
    if (!(m > 0.0) || !(p > 1.0))
        throw std::invalid_argument("check_hoelder_identity: need m > 0, p > 1");
    const double pp = p / (p - 1.0);
    const double kp = hoelder_constant(p) * kp_factor;
    double worst = 0.0;
    for (double x : x_samples) {
        const double w = std::pow(x, m);
        const double norm_pp = quad::integrate_or_throw(
            [w, pp](double tau) { return std::pow(w - tau, pp); }, -w, w, 1e-12);
        const double lhs = std::pow(norm_pp, 1.0 / pp);
        const double rhs = kp * std::pow(x, m * (2.0 * p - 1.0) / p);
        worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
    return worst;
}

AsymptoticCheck check_asymptotic_limit(double p, double r, double alpha,
                                       const std::vector<double>& probes,
                                       double integrand_scale) {
    if (!(alpha > -r / p))
        throw NotAdmissibleError("check_asymptotic_limit: requires alpha > -r/p");
    AsymptoticCheck out;
    out.probes = probes;
    out.limit = integrand_scale * p / (2.0 * (p - 1.0));
    const double c = 2.0 - 2.0 / p;
    const double delta = -1.0 / p - r - alpha;
    for (double x : probes) {
        const double T = -std::log(x);
        // int_0^x s^{1-2/p} (-ln s)^{delta} ds = e^{-cT} int_0^inf e^{-cs}(T+s)^delta ds
        auto g = [=](double s) { return std::exp(-c * s) * std::pow(T + s, delta); };
        quad::Result tail = quad::integrate_exp_tail(g, 0.0, c, 1e-12);
        if (!tail.converged) throw QuadratureError("asymptotic probe quadrature failed");
        const double ratio = integrand_scale * tail.value / std::pow(T, delta);
        out.ratios.push_back(ratio);
    }
    out.monotone = true;
    for (size_t i = 1; i < out.ratios.size(); ++i)
        if (!(std::abs(out.ratios[i] - out.limit) < std::abs(out.ratios[i - 1] - out.limit)))
            out.monotone = false;
    if (out.ratios.size() >= 2) {
        const size_t n = out.ratios.size();
        const double t1 = -std::log(probes[n - 2]);
        const double t2 = -std::log(probes[n - 1]);
        out.extrapolated = (out.ratios[n - 1] * t2 - out.ratios[n - 2] * t1) / (t2 - t1);
    } else if (!out.ratios.empty()) {
        out.extrapolated = out.ratios.back();
    }
    return out;
}

double check_measure_induction(double m, int N, const std::vector<double>& x_samples,
                               long long n_mc, uint64_t seed) {
    const FamilyParams fp = N == 2 ? FamilyParams::poly2d(m, 2.0) : FamilyParams::polyNd(m, N, 2.0);
    const DomainSpec dom = DomainSpec::make(fp);
    double worst = 0.0;
    for (size_t i = 0; i < x_samples.size(); ++i) {
        const double x = x_samples[i];
        const double exact = dom.cross_section_measure(x);
        const McEstimate mc = mc_measure(dom, McRegion::cross_section(x), n_mc, seed + i);
        if (mc.std_error == 0.0) {
            // 2D sections fill their bounding box; the estimate is exact.
            if (mc.value != exact) worst = std::max(worst, 1e9);
            continue;
        }
        worst = std::max(worst, std::abs(mc.value - exact) / mc.std_error);
    }
    return worst;
}

bool SelftestReport::all_passed() const {
    for (const SelftestCheck& c : checks)
        if (!c.passed) return false;
    return true;
}

nlohmann::json SelftestReport::to_json() const {
    nlohmann::json j;
    j["passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const SelftestCheck& c : checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["passed"] = c.passed;
        jc["worst"] = c.worst;
        jc["tolerance"] = c.tolerance;
        if (!c.details.empty()) jc["details"] = c.details;
        j["checks"].push_back(jc);
    }
    return j;
}

namespace {

SelftestCheck make_check(const std::string& name, double worst, double tol,
                         const std::string& details = "") {
    SelftestCheck c;
    c.name = name;
    c.worst = worst;
    c.tolerance = tol;
    c.passed = worst < tol;
    c.details = details;
    return c;
}

}  // namespace

SelftestReport run_selftest(uint64_t seed, bool inject_kp_error) {
    SelftestReport rep;

    const DomainSpec poly = DomainSpec::make(FamilyParams::poly2d(2.0, 2.0));

    {
        SyntheticField field(poly, 0.3, 0.8);
        std::vector<double> xs;
        for (int i = 0; i < 20; ++i) xs.push_back(0.25 + 0.6 * i / 19.0);
        rep.checks.push_back(
            make_check("weak_derivative_residual", check_weak_derivative(field, xs), 1e-6));
    }
    {
        SyntheticField field(poly, 0.3, 0.8);
        SyntheticField big(poly, 0.3, 0.8, 1e6);
        const bool ok = check_limit_zero(field) && check_limit_zero(big);
        SelftestCheck c;
        c.name = "cross_section_limit_zero";
        c.passed = ok;
        c.tolerance = 1.0;
        c.worst = ok ? 0.0 : 1.0;
        rep.checks.push_back(c);
    }
    {
        const double factor = inject_kp_error ? 1.0 + 1e-3 : 1.0;
        double worst = 0.0;
        for (double m : {1.5, 2.0, 3.0})
            for (double p : {1.5, 2.0, 3.0})
                worst = std::max(worst, check_hoelder_identity(m, p, {0.1, 0.5, 1.0}, factor));
        rep.checks.push_back(make_check("hoelder_identity", worst, 1e-8));
    }
    {
        double worst = 0.0;
        bool monotone = true;
        for (auto [p, r, a] : {std::tuple{2.0, 1.5, 0.0}, std::tuple{3.0, 1.0, 0.1}}) {
            AsymptoticCheck chk = check_asymptotic_limit(p, r, a);
            worst = std::max(worst, std::abs(chk.extrapolated / chk.limit - 1.0));
            monotone = monotone && chk.monotone;
        }
        rep.checks.push_back(make_check("asymptotic_limit", worst, 0.02,
                                        monotone ? "monotone approach" : "non-monotone approach"));
        if (!monotone) rep.checks.back().passed = false;
    }
    {
        double worst = 0.0;
        worst = std::max(worst, check_measure_induction(2.0, 2, {0.25, 0.5, 0.9}, 1000000, seed));
        worst = std::max(worst, check_measure_induction(2.0, 3, {0.25, 0.5, 0.9}, 1000000, seed + 101));
        worst = std::max(worst, check_measure_induction(1.5, 4, {0.3, 0.5, 0.9}, 1000000, seed + 202));
        rep.checks.push_back(make_check("measure_induction_mc", worst, 3.0));
    }
    {
        // trichotomy + divergence-rate consistency on random draws
        Rng rng(seed, 777);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            FamilyParams fp;
            const int fam = static_cast<int>(rng.next() % 3);
            const double p = rng.uniform(1.2, 3.5);
            if (fam == 0) fp = FamilyParams::poly2d(rng.uniform(1.1, 3.0), p);
            else if (fam == 1) fp = FamilyParams::polyNd(rng.uniform(1.1, 3.0), 2 + static_cast<int>(rng.next() % 3), p);
            else fp = FamilyParams::log2d(rng.uniform(0.2, 2.5), p);
            const ExponentReport rp = thresholds(fp);
            const double alpha = rng.uniform(rp.t1 + 0.05, rp.t2 + 1.0);
            const Classification cls = classify(fp, alpha);
            const Classification expected =
                alpha <= rp.t1 ? Classification::NotInLp
                               : (alpha <= rp.t2 ? Classification::CertifiedNonexistence
                                                 : Classification::NoConclusion);
            if (cls != expected) worst = 1.0;
            if (std::abs(alpha - rp.t2) > 1e-9) {
                const DivergenceRate rate = divergence_exponent(fp, alpha);
                const bool conv = rate.kind == RateKind::Convergent;
                if (conv != (cls == Classification::NoConclusion)) worst = 1.0;
            }
        }
        rep.checks.push_back(make_check("classification_trichotomy", worst, 0.5));
    }
    {
        // dimension reduction N = 2
        Rng rng(seed, 991);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double m = rng.uniform(1.05, 3.5);
            const double p = rng.uniform(1.2, 3.5);
            const FamilyParams a = FamilyParams::poly2d(m, p);
            const FamilyParams b = FamilyParams::polyNd(m, 2, p);
            const ExponentReport ra = thresholds(a), rb = thresholds(b);
            worst = std::max({worst, std::abs(ra.t1 - rb.t1), std::abs(ra.t2 - rb.t2),
                              std::abs(hoelder_weight_exponent(a) - hoelder_weight_exponent(b))});
        }
        rep.checks.push_back(make_check("nd_reduction_identity", worst, 1e-15));
    }
    {
        double worst = 0.0;
        for (double alpha : {0.0, -1.25}) {
            const RhsSpec rhs = make_rhs(poly, alpha);
            worst = std::max(worst, zero_mean_residual(rhs));
        }
        const DomainSpec logd = DomainSpec::make(FamilyParams::log2d(1.0, 2.0));
        worst = std::max(worst, zero_mean_residual(make_rhs(logd, 0.25)));
        rep.checks.push_back(make_check("zero_mean_residual", worst, 1e-9));
    }
    {
        // certificate constant for N >= 3 against the Beta closed form
        double worst = 0.0;
        for (int N : {3, 4, 5})
            for (double p : {1.5, 2.0, 3.0}) {
                const FamilyParams fp = FamilyParams::polyNd(2.0, N, p);
                const double pp = p / (p - 1.0);
                const int k = N - 2;
                const double beta_int =
                    0.5 * k * unit_ball_volume(k) *
                    std::exp(std::lgamma(0.5 * k) + std::lgamma(0.5 * (pp + 3.0)) -
                             std::lgamma(0.5 * k + 0.5 * (pp + 3.0)));
                const double closed =
                    std::pow(std::pow(2.0, pp + 1.0) / (pp + 1.0) * beta_int, 1.0 / pp);
                worst = std::max(worst,
                                 std::abs(certificate_constant(fp, p) / closed - 1.0));
            }
        rep.checks.push_back(make_check("nd_certificate_constant", worst, 1e-10));
    }
    return rep;
}

}  // namespace cuspdiv
