#ifndef CUSPDIV_ANALYTIC_HPP
#define CUSPDIV_ANALYTIC_HPP

#include <string>

namespace cuspdiv {

// The three cusp-domain families.
//   PolyCusp2D: planar domain pinched between y = +-x^m near the origin,
//               closed by the unit disc centered at (1, 0).
//   PolyCuspND: N-dimensional body of revolution with radius x1^m, closed by
//               the cone r = 2 - x1.
//   LogCusp2D:  planar domain pinched between y = +-x(-ln x)^(-r), closed by
//               a disc; Hoelder continuous for every exponent in (0,1) when
//               r > 0, yet not Lipschitz.
enum class Family { PolyCusp2D, PolyCuspND, LogCusp2D };

struct FamilyParams {
    Family family = Family::PolyCusp2D;
    double m = 0.0;  // cusp power (poly families)
    int dim = 2;     // space dimension N (PolyCuspND)
    double r = 0.0;  // log exponent (LogCusp2D)
    double p = 2.0;  // Lebesgue exponent, strictly inside (1, inf)

    // Constructors validate and throw std::invalid_argument on bad input.
    static FamilyParams poly2d(double m, double p);
    static FamilyParams polyNd(double m, int N, double p);  // N = 2 delegates to the 2D formulas
    static FamilyParams log2d(double r, double p);
};

enum class Classification { NotInLp, CertifiedNonexistence, NoConclusion };

std::string to_string(Classification c);

// Admissibility and certificate thresholds for alpha.  The half-open-closed
// counterexample interval is (t1, t2]; it is empty iff t2 <= t1.
struct ExponentReport {
    double t1 = 0.0;  // f in L^p  <=>  alpha > t1
    double t2 = 0.0;  // non-existence certified for alpha in (t1, t2]
    bool interval_empty = true;
};

ExponentReport thresholds(const FamilyParams& params);

// Trichotomy: alpha <= t1 -> NotInLp; t1 < alpha <= t2 -> CertifiedNonexistence;
// alpha > t2 -> NoConclusion.  Shares the arithmetic path with thresholds().
Classification classify(const FamilyParams& params, double alpha);

// Growth of the certificate lower bound LB(eps) as eps -> 0.
//   Poly families (integrand x^e over (eps, 1)):
//     Convergent           e > -1
//     Power                e < -1, LB ~ eps^{-beta}, exponent = beta = -(e+1)
//     Logarithmic          e = -1, LB ~ ln(1/eps)
//   LogCusp family (integrand t^e over (ln 2, -ln eps) after t = -ln x):
//     Convergent           e < -1
//     LogPower             e > -1, LB ~ (ln(1/eps))^{e+1}, exponent = e+1
//     DoubleLog            e = -1, LB ~ ln ln(1/eps)
enum class RateKind { Convergent, Power, Logarithmic, LogPower, DoubleLog };

struct DivergenceRate {
    RateKind kind = RateKind::Convergent;
    double exponent = 0.0;  // beta (Power) or e+1 (LogPower); 0 otherwise
};

std::string to_string(RateKind k);

// Exponent e of the certificate integrand for (params, alpha).
double certificate_integrand_exponent(const FamilyParams& params, double alpha);

// Throws NotAdmissibleError when alpha <= t1.
DivergenceRate divergence_exponent(const FamilyParams& params, double alpha);

// K_p = 2^{(2p-1)/p} ((p-1)/(2p-1))^{(p-1)/p}, the exact constant with
// ||x^m - .||_{L^{p/(p-1)}(-x^m, x^m)} = K_p x^{m(2p-1)/p}.
double hoelder_constant(double p);

// Weight w(x) dividing the cumulative flux in the certificate integrand:
//   PolyCusp2D   x^{m(2p-1)/p}
//   PolyCuspND   x^{(m(2p-1) + m(p-1)(N-2))/p}
//   LogCusp2D    x^{(2p-1)/p} (-ln x)^{-r(2p-1)/p}
// x must lie in the cusp range ((0,1) poly, (0,1/2) log).
double hoelder_weight(const FamilyParams& params, double x);

// Exponent of x in w(x) (poly families; LogCusp returns the power of x).
double hoelder_weight_exponent(const FamilyParams& params);

double cusp_range_max(const FamilyParams& params);  // 1 (poly) or 1/2 (log)

}  // namespace cuspdiv

#endif
