#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cuspdiv/analytic.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/quadrature.hpp"
#include "cuspdiv/rng.hpp"

using namespace cuspdiv;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(FamilyParams::poly2d(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::poly2d(2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::poly2d(2.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::poly2d(2.0, std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::poly2d(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::poly2d(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams::polyNd(2.0, 1, 2.0), std::invalid_argument);
    CHECK_NOTHROW(FamilyParams::polyNd(2.0, 2, 2.0));
    CHECK_NOTHROW(FamilyParams::log2d(-3.0, 2.0));  // thresholds accept any r
}

TEST_CASE("threshold table") {
    const ExponentReport a = thresholds(FamilyParams::poly2d(2.0, 2.0));
    CHECK(a.t1 == -1.5);
    CHECK(a.t2 == -0.5);
    CHECK_FALSE(a.interval_empty);

    // m = 1: boundary is Lipschitz, nothing can be refuted
    for (double p : {1.5, 2.0, 7.0}) CHECK(thresholds(FamilyParams::poly2d(1.0, p)).interval_empty);

    const ExponentReport b = thresholds(FamilyParams::polyNd(2.0, 3, 2.0));
    CHECK(b.t1 == -2.5);
    CHECK(b.t2 == -1.5);

    const ExponentReport c = thresholds(FamilyParams::log2d(1.5, 2.0));
    CHECK(c.t1 == -0.75);
    CHECK(c.t2 == 0.75);

    // r <= 0: no cusp, empty interval
    CHECK(thresholds(FamilyParams::log2d(0.0, 2.0)).interval_empty);
    CHECK(thresholds(FamilyParams::log2d(-1.0, 3.0)).interval_empty);
}

TEST_CASE("classification trichotomy") {
    const FamilyParams fp = FamilyParams::poly2d(2.0, 2.0);
    CHECK(classify(fp, -1.25) == Classification::CertifiedNonexistence);
    CHECK(classify(fp, -1.6) == Classification::NotInLp);
    CHECK(classify(fp, 0.0) == Classification::NoConclusion);
    // boundary conventions: t1 excluded, t2 included
    CHECK(classify(fp, -1.5) == Classification::NotInLp);
    CHECK(classify(fp, -0.5) == Classification::CertifiedNonexistence);
}

TEST_CASE("divergence exponent of the certificate integrand") {
    const FamilyParams fp = FamilyParams::poly2d(2.0, 2.0);

    SUBCASE("power divergence, beta from closed-form integration") {
        const DivergenceRate rate = divergence_exponent(fp, -1.25);
        CHECK(rate.kind == RateKind::Power);
        CHECK(rate.exponent == doctest::Approx(1.5).epsilon(1e-14));

        // independent oracle: integrate x^e over (eps, 1) by quadrature for
        // two eps and recover beta from the growth
        const double e = certificate_integrand_exponent(fp, -1.25);
        CHECK(e == doctest::Approx(-2.5).epsilon(1e-14));
        auto tail = [&](double eps) {
            return quad::integrate_or_throw([e](double x) { return std::pow(x, e); }, eps, 1.0,
                                            1e-12);
        };
        // tail ~ eps^{-beta}: beta = ln(tail(1e-6)/tail(1e-4)) / ln(100)
        const double beta_fit = std::log(tail(1e-6) / tail(1e-4)) / std::log(100.0);
        CHECK(beta_fit == doctest::Approx(1.5).epsilon(1e-3));
    }

    SUBCASE("endpoint alpha = t2 is logarithmic") {
        const DivergenceRate rate = divergence_exponent(fp, -0.5);
        CHECK(rate.kind == RateKind::Logarithmic);
    }

    SUBCASE("log family: power of ln(1/eps)") {
        const DivergenceRate rate = divergence_exponent(FamilyParams::log2d(1.0, 2.0), 0.0);
        CHECK(rate.kind == RateKind::LogPower);
        CHECK(rate.exponent == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("inadmissible alpha is rejected") {
        CHECK_THROWS_AS(divergence_exponent(fp, -1.5), NotAdmissibleError);
        CHECK_THROWS_AS(divergence_exponent(fp, -2.0), NotAdmissibleError);
    }
}

TEST_CASE("hoelder constant closed form against quadrature") {
    CHECK(hoelder_constant(2.0) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
    CHECK(hoelder_constant(3.0) ==
          doctest::Approx(std::pow(2.0, 5.0 / 3.0) * std::pow(0.4, 2.0 / 3.0)).epsilon(1e-15));

    // ||x^m - .||_{p/(p-1)} / (K_p x^{m(2p-1)/p}) = 1 to 1e-8 over the sweep
    for (double m : {1.5, 2.0, 3.0})
        for (double p : {1.5, 2.0, 3.0})
            for (double x : {0.1, 0.5, 1.0}) {
                const double pp = p / (p - 1.0);
                const double w = std::pow(x, m);
                const double norm = std::pow(
                    quad::integrate_or_throw(
                        [w, pp](double tau) { return std::pow(w - tau, pp); }, -w, w, 1e-12),
                    1.0 / pp);
                const double predicted =
                    hoelder_constant(p) * std::pow(x, m * (2.0 * p - 1.0) / p);
                CHECK(std::abs(norm / predicted - 1.0) < 1e-8);
            }
}

TEST_CASE("hoelder weight values") {
    CHECK(hoelder_weight(FamilyParams::poly2d(2.0, 2.0), 0.5) ==
          doctest::Approx(0.125).epsilon(1e-15));
    CHECK(hoelder_weight(FamilyParams::polyNd(2.0, 3, 2.0), 0.5) ==
          doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(hoelder_weight(FamilyParams::log2d(1.0, 2.0), std::exp(-1.0)) ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(hoelder_weight(FamilyParams::poly2d(2.0, 2.0), 1.5), std::domain_error);
    CHECK_THROWS_AS(hoelder_weight(FamilyParams::log2d(1.0, 2.0), 0.75), std::domain_error);
}

TEST_CASE("dimension reduction: polyNd with N = 2 equals poly2d") {
    Rng rng(2024);
    for (int k = 0; k < 100; ++k) {
        const double m = rng.uniform(1.05, 4.0);
        const double p = rng.uniform(1.1, 6.0);
        const FamilyParams a = FamilyParams::poly2d(m, p);
        const FamilyParams b = FamilyParams::polyNd(m, 2, p);
        const ExponentReport ra = thresholds(a), rb = thresholds(b);
        CHECK(ra.t1 == rb.t1);
        CHECK(ra.t2 == rb.t2);
        CHECK(hoelder_weight_exponent(a) == hoelder_weight_exponent(b));
        const double alpha = rng.uniform(ra.t1 + 0.01, ra.t2 + 1.0);
        if (std::abs(alpha - ra.t2) < 1e-9) continue;
        const DivergenceRate da = divergence_exponent(a, alpha);
        const DivergenceRate db = divergence_exponent(b, alpha);
        CHECK(da.kind == db.kind);
        CHECK(da.exponent == db.exponent);
    }
}

TEST_CASE("classification and divergence rate are consistent") {
    Rng rng(55);
    for (int k = 0; k < 300; ++k) {
        FamilyParams fp = FamilyParams::poly2d(1.0, 2.0);
        switch (rng.next() % 3) {
            case 0: fp = FamilyParams::poly2d(rng.uniform(1.05, 3.5), rng.uniform(1.2, 4.0)); break;
            case 1:
                fp = FamilyParams::polyNd(rng.uniform(1.05, 3.5), 2 + int(rng.next() % 4),
                                          rng.uniform(1.2, 4.0));
                break;
            default: fp = FamilyParams::log2d(rng.uniform(0.1, 3.0), rng.uniform(1.2, 4.0)); break;
        }
        const ExponentReport rep = thresholds(fp);
        const double alpha = rng.uniform(rep.t1 + 1e-3, rep.t2 + 2.0);
        if (std::abs(alpha - rep.t2) < 1e-9) continue;
        const bool convergent = divergence_exponent(fp, alpha).kind == RateKind::Convergent;
        CHECK(convergent == (classify(fp, alpha) == Classification::NoConclusion));
    }
}

TEST_CASE("threshold monotonicity and interval lengths") {
    // |t1| shrinks as p grows (t1 < 0 increases toward 0)
    for (double m : {1.5, 2.0, 3.0}) {
        double prev = thresholds(FamilyParams::poly2d(m, 1.2)).t1;
        for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
            const double t1 = thresholds(FamilyParams::poly2d(m, p)).t1;
            CHECK(t1 > prev);
            prev = t1;
        }
    }
    Rng rng(77);
    for (int k = 0; k < 50; ++k) {
        const double m = rng.uniform(1.01, 4.0);
        const double p = rng.uniform(1.1, 5.0);
        const ExponentReport rp = thresholds(FamilyParams::poly2d(m, p));
        CHECK(rp.t2 - rp.t1 == doctest::Approx(m - 1.0).epsilon(1e-12));
        const double r = rng.uniform(0.05, 3.0);
        const ExponentReport rl = thresholds(FamilyParams::log2d(r, p));
        CHECK(rl.t2 - rl.t1 == doctest::Approx(r).epsilon(1e-12));
    }
}
