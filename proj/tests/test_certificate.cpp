#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cuspdiv/certificate.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/lemma_verify.hpp"
#include "cuspdiv/quadrature.hpp"
#include "cuspdiv/ratefit.hpp"
#include "cuspdiv/rng.hpp"

using namespace cuspdiv;

namespace {
const DomainSpec poly2 = DomainSpec::make(FamilyParams::poly2d(2.0, 2.0));
constexpr double pi = std::numbers::pi;
}  // namespace

TEST_CASE("cross-section flux") {
    const RhsSpec sing = make_rhs(poly2, -1.25);
    CHECK(flux(sing, 0.5) == doctest::Approx(2.0 * std::pow(0.5, 0.75)).epsilon(1e-14));
    CHECK(flux(sing, 0.5) == doctest::Approx(1.189207).epsilon(1e-6));

    const DomainSpec nd = DomainSpec::make(FamilyParams::polyNd(2.0, 3, 2.0));
    const RhsSpec ndrhs = make_rhs(nd, 0.0);
    CHECK(flux(ndrhs, 0.5) == doctest::Approx(pi / 16.0).epsilon(1e-13));

    const DomainSpec logd = DomainSpec::make(FamilyParams::log2d(1.0, 2.0));
    const RhsSpec logrhs = make_rhs(logd, 0.0);
    CHECK(flux(logrhs, std::exp(-1.0)) == doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(flux(sing, 1.5), std::domain_error);
}

TEST_CASE("cumulative flux") {
    const RhsSpec sing = make_rhs(poly2, -1.25);
    for (double x : {0.1, 0.5, 0.9})
        CHECK(cumulative_flux(sing, x) ==
              doctest::Approx((8.0 / 7.0) * std::pow(x, 1.75)).epsilon(1e-14));

    // vanishing limit at the tip
    CHECK(std::abs(cumulative_flux(sing, 1e-8)) < 1e-13);

    // closed form against direct quadrature of the flux
    const double by_quad = quad::integrate_to_zero_or_throw(
        [&](double s) { return flux(sing, s); }, 0.5, 1e-12);
    CHECK(cumulative_flux(sing, 0.5) == doctest::Approx(by_quad).epsilon(1e-10));

    CHECK_THROWS_AS(cumulative_flux(make_rhs(poly2, -1.6, true), 0.5), NotAdmissibleError);
}

TEST_CASE("log-family cumulative flux approaches its leading-order form") {
    // ratio A / A_asymptotic -> 1 like 1 + O(1/ln(1/x)); the asymptotic
    // prefactor includes the cross-section factor 2, i.e.
    // A(x) ~ (p/(p-1)) x^{2-2/p} (-ln x)^{delta}
    const DomainSpec logd = DomainSpec::make(FamilyParams::log2d(1.5, 2.0));
    const RhsSpec rhs = make_rhs(logd, 0.0);
    double prev_err = 1e9;
    std::vector<double> ts, ratios;
    for (double x : {1e-4, 1e-6, 1e-8}) {
        const double ratio = cumulative_flux(rhs, x) / cumulative_flux_asymptotic(rhs, x);
        const double err = std::abs(ratio - 1.0);
        CHECK(err < prev_err);  // monotone approach
        prev_err = err;
        ts.push_back(-std::log(x));
        ratios.push_back(ratio);
    }
    // remove the leading 1/T correction: the limit lands within 2%
    const double extrapolated =
        (ratios[2] * ts[2] - ratios[1] * ts[1]) / (ts[2] - ts[1]);
    CHECK(std::abs(extrapolated - 1.0) < 0.02);

    // p/(p-1) = 2 at p = 2: the prefactor in front of x (-ln x)^{-2}
    CHECK(cumulative_flux_asymptotic(rhs, 1e-6) ==
          doctest::Approx(2.0 * 1e-6 * std::pow(-std::log(1e-6), -2.0)).epsilon(1e-12));
}

TEST_CASE("certificate constant") {
    // 2D families use the closed-form Hoelder constant
    CHECK(certificate_constant(FamilyParams::poly2d(2.0, 2.0), 2.0) == hoelder_constant(2.0));
    CHECK(certificate_constant(FamilyParams::log2d(1.0, 3.0), 3.0) == hoelder_constant(3.0));
    CHECK(certificate_constant(FamilyParams::polyNd(2.0, 2, 2.0), 2.0) == hoelder_constant(2.0));

    // N = 3, p = 2: the cross-section norm at x1 = 1 is sqrt(pi)
    CHECK(certificate_constant(FamilyParams::polyNd(2.0, 3, 2.0), 2.0) ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-11));
}

TEST_CASE("lower bound closed form and quadrature cross-check") {
    const RhsSpec sing = make_rhs(poly2, -1.25);

    CHECK(lower_bound(sing, 2.0, 0.01) ==
          doctest::Approx((16.0 / 49.0) * (std::pow(0.01, -1.5) - 1.0)).epsilon(1e-12));
    CHECK(lower_bound(sing, 2.0, 0.01) == doctest::Approx(326.204081632653).epsilon(1e-9));
    CHECK(lower_bound(sing, 2.0, 1.0) == 0.0);  // empty range

    // independent path: generic-A quadrature
    const double by_quad = lower_bound_from_A(
        poly2, 2.0, [](double x) { return (8.0 / 7.0) * std::pow(x, 1.75); }, 0.01);
    CHECK(by_quad == doctest::Approx(lower_bound(sing, 2.0, 0.01)).epsilon(1e-8));

    // convergent regime: LB(eps) = (1 - eps)/6 for alpha = 0
    const RhsSpec flat = make_rhs(poly2, 0.0);
    CHECK(lower_bound(flat, 2.0, 0.5) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(lower_bound(flat, 2.0, 1e-6) == doctest::Approx((1.0 - 1e-6) / 6.0).epsilon(1e-12));

    CHECK_THROWS_AS(lower_bound(make_rhs(poly2, -1.6, true), 2.0, 0.01), NotAdmissibleError);
}

TEST_CASE("lower bound for the N-dimensional family") {
    const DomainSpec nd = DomainSpec::make(FamilyParams::polyNd(2.0, 3, 2.0));
    const RhsSpec rhs = make_rhs(nd, -1.7);
    // A = (pi/3.3) x^{3.3}, w = x^4, K^{-2} = 1/pi: LB = (pi/3.3^2)(eps^{-0.4}-1)/0.4
    const double expect =
        (pi / (3.3 * 3.3)) * (std::pow(0.01, -0.4) - 1.0) / 0.4;
    CHECK(lower_bound(rhs, 2.0, 0.01) == doctest::Approx(expect).epsilon(1e-10));

    // N = 2 reduction matches the planar family to 1e-12
    const DomainSpec nd2 = DomainSpec::make(FamilyParams::polyNd(1.7, 2, 2.3));
    const DomainSpec pl = DomainSpec::make(FamilyParams::poly2d(1.7, 2.3));
    const RhsSpec a = make_rhs(nd2, -0.9);
    const RhsSpec b = make_rhs(pl, -0.9);
    for (double eps : {0.3, 0.01, 1e-5})
        CHECK(std::abs(lower_bound(a, 2.3, eps) - lower_bound(b, 2.3, eps)) <=
              1e-12 * std::max(1.0, lower_bound(b, 2.3, eps)));
}

TEST_CASE("truncated-domain lower bound uses the cut cumulative flux") {
    const DomainSpec trunc = poly2.truncate(0.1);
    const RhsSpec rhs = make_rhs(trunc, -1.25);
    CHECK(cumulative_flux(rhs, 0.1) == 0.0);

    const double base = std::pow(0.1, 1.75);
    const double expect = lower_bound_from_A(
        poly2, 2.0, [base](double x) { return (8.0 / 7.0) * (std::pow(x, 1.75) - base); }, 0.2);
    CHECK(lower_bound(rhs, 2.0, 0.2) == doctest::Approx(expect).epsilon(1e-8));
    CHECK_THROWS_AS(lower_bound(rhs, 2.0, 0.05), std::domain_error);
}

TEST_CASE("scaling linearity") {
    const RhsSpec base = make_rhs(poly2, -1.25);
    const RhsSpec scaled = make_rhs(poly2, -1.25, false, -3.0);
    CHECK(flux(scaled, 0.5) == doctest::Approx(-3.0 * flux(base, 0.5)).epsilon(1e-14));
    CHECK(cumulative_flux(scaled, 0.5) ==
          doctest::Approx(-3.0 * cumulative_flux(base, 0.5)).epsilon(1e-14));
    CHECK(lower_bound(scaled, 2.0, 0.01) ==
          doctest::Approx(9.0 * lower_bound(base, 2.0, 0.01)).epsilon(1e-12));

    const DomainSpec logd = DomainSpec::make(FamilyParams::log2d(1.0, 2.0));
    const RhsSpec lbase = make_rhs(logd, 0.2);
    const RhsSpec lscaled = make_rhs(logd, 0.2, false, 2.0);
    CHECK(lower_bound(lscaled, 2.0, 0.01) ==
          doctest::Approx(4.0 * lower_bound(lbase, 2.0, 0.01)).epsilon(1e-10));
}

TEST_CASE("rate fitting recovers exact power laws") {
    std::vector<double> eps, lb;
    for (int k = 4; k <= 20; ++k) {
        eps.push_back(std::ldexp(1.0, -k));
        lb.push_back(5.0 * std::pow(eps.back(), -1.5));
    }
    const LinearFit fit = fit_loglog(eps, lb);
    CHECK(-fit.slope == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("certificate curve: diverging, logarithmic, converging") {
    const std::vector<double> grid = dyadic_eps_grid(4, 20);

    SUBCASE("power divergence at alpha = -1.25") {
        const CertificateCurve curve = certificate_curve(make_rhs(poly2, -1.25), 2.0, grid);
        CHECK(curve.verdict.diverges);
        CHECK(curve.verdict.model == RateKind::Power);
        CHECK(std::abs(curve.fitted_rate - 1.5) / 1.5 < 0.03);
        for (size_t i = 1; i < curve.lb_values.size(); ++i)
            CHECK(curve.lb_values[i] >= curve.lb_values[i - 1]);
    }

    SUBCASE("endpoint alpha = -0.5 selects the logarithmic model") {
        const CertificateCurve curve = certificate_curve(make_rhs(poly2, -0.5), 2.0, grid);
        CHECK(curve.verdict.diverges);
        CHECK(curve.verdict.model == RateKind::Logarithmic);
        CHECK(curve.log_residual < curve.power_residual);
    }

    SUBCASE("convergent case alpha = 0") {
        const CertificateCurve curve = certificate_curve(make_rhs(poly2, 0.0), 2.0, grid);
        CHECK_FALSE(curve.verdict.diverges);
        const size_t n = curve.lb_values.size();
        const double rel =
            std::abs(curve.lb_values[n - 1] - curve.lb_values[n - 2]) / curve.lb_values[n - 1];
        CHECK(rel < 1e-3);
        CHECK(curve.verdict.limit_estimate == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    }

    SUBCASE("grid validation") {
        CHECK_THROWS_AS(certificate_curve(make_rhs(poly2, 0.0), 2.0, {0.1, 0.2}),
                        std::invalid_argument);
        CHECK_THROWS_AS(certificate_curve(make_rhs(poly2, 0.0), 2.0, {0.1}),
                        std::invalid_argument);
    }
}

TEST_CASE("fitted rate agrees with the analytic divergence exponent") {
    Rng rng(321);
    int done = 0;
    while (done < 10) {
        const double m = rng.uniform(1.4, 3.0);
        const double p = rng.uniform(1.5, 3.0);
        const FamilyParams fp = rng.next() % 2 ? FamilyParams::poly2d(m, p)
                                               : FamilyParams::polyNd(m, 3, p);
        const ExponentReport rep = thresholds(fp);
        const double alpha = rng.uniform(rep.t1 + 0.15 * (rep.t2 - rep.t1), rep.t2 - 0.4 / p);
        if (!(alpha > rep.t1)) continue;
        const DivergenceRate rate = divergence_exponent(fp, alpha);
        if (rate.kind != RateKind::Power) continue;
        const CertificateCurve curve =
            certificate_curve(make_rhs(DomainSpec::make(fp), alpha), p, dyadic_eps_grid(4, 20));
        CHECK(curve.verdict.diverges);
        CHECK(std::abs(curve.fitted_rate - rate.exponent) / rate.exponent < 0.03);
        ++done;
    }
}

TEST_CASE("functional inequality on a synthetic divergence-free-boundary field") {
    // u = (u1, 0) with u1 a boundary-vanishing bump; f = div u.  The
    // certificate chain bounds K^{-p} int (A/w)^p by the y-derivative energy.
    for (double p : {2.0, 3.0}) {
        const DomainSpec dom = DomainSpec::make(FamilyParams::poly2d(2.0, p));
        const SyntheticField field(dom, 0.3, 0.8);
        auto a_of = [&field](double x) { return field.cross_section_integral(x); };
        const double lhs = lower_bound_from_A(dom, p, a_of, 1e-4);
        const double rhs_energy = quad::integrate_or_throw(
            [&](double x) {
                if (field.bump(x) == 0.0) return 0.0;
                const double w = dom.width(x);
                return quad::integrate_or_throw(
                    [&](double y) { return std::pow(std::abs(field.du_dy(x, y)), p); }, -w, w,
                    1e-10);
            },
            0.25, 0.85, 1e-8);
        CHECK(lhs <= rhs_energy);
        CHECK(lhs > 0.0);
    }
}
