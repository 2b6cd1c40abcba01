#ifndef CUSPDIV_RHS_HPP
#define CUSPDIV_RHS_HPP

#include <nlohmann/json_fwd.hpp>

#include "cuspdiv/geometry.hpp"

namespace cuspdiv {

// A member of the model right-hand-side families with zero mean over the
// domain: on the cusp part
//   PolyCusp:  f(x, .) = scale * x^alpha
//   LogCusp:   f(x, .) = scale * x^{-2/p} (-ln x)^{-1/p - alpha}
// and the constant cap_constant on the cap, fixed so that the integral of f
// over the (possibly truncated) domain vanishes.
struct RhsSpec {
    DomainSpec domain;
    double alpha = 0.0;
    double scale = 1.0;  // cusp coefficient; 1 except in scaling tests
    double cap_constant = 0.0;

    double evaluate(const Point& pt) const;     // pt must lie inside the domain
    double evaluate(double x, double y) const;  // 2D convenience
    double cusp_value(double x) const;          // the cusp formula, no membership test

    nlohmann::json to_json() const;
};

// Builds the right-hand side and its zero-mean cap constant.  Throws NotAdmissibleError
// when alpha <= t1 unless allow_not_in_lp is set (and, for the poly families,
// unconditionally when even the L^1 cusp integral diverges so no zero-mean
// extension exists).
RhsSpec make_rhs(const DomainSpec& domain, double alpha, bool allow_not_in_lp = false,
                 double scale = 1.0);

// Integral of f over the cusp part (above the cut).
double cusp_integral(const RhsSpec& rhs);

struct LpNormResult {
    bool diverges = false;
    double value = 0.0;  // ||f||_p when finite
};

// ||f||_p with divergence detection at the cusp tip.  Divergence is decided
// analytically from the thresholds and confirmed by dyadic-interval
// quadrature toward 0 (partial sums must exceed `divergence_bound` or keep a
// non-decaying tail).
LpNormResult lp_norm(const RhsSpec& rhs, double p, double divergence_bound = 1e12);

// |integral of f over the domain| / ||f||_1, everything by quadrature paths
// independent of the closed forms used in make_rhs.  Used by the zero-mean
// invariant checks.
double zero_mean_residual(const RhsSpec& rhs, double rel_tol = 1e-11);

}  // namespace cuspdiv

#endif
