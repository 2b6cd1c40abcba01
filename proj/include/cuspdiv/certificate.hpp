#ifndef CUSPDIV_CERTIFICATE_HPP
#define CUSPDIV_CERTIFICATE_HPP

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cuspdiv/rhs.hpp"

namespace cuspdiv {

// Cross-section flux G(x): integral of f over the cusp cross-section at x.
// Exact closed form: f_cusp(x) * cross_section_measure(x).
double flux(const RhsSpec& rhs, double x);

// Cumulative flux A(x) = integral of G over (cut, x).  For any candidate
// solution u, A(x) equals the cross-section integral of u1, and A(cut) = 0
// (zero trace on the cut face, or the vanishing limit at the tip).
// Throws NotAdmissibleError when alpha <= t1.
double cumulative_flux(const RhsSpec& rhs, double x);

// Leading-order form of A(x) for the log family as x -> 0 (validation of the
// quadrature path; first-order accurate only).
double cumulative_flux_asymptotic(const RhsSpec& rhs, double x);

// The exact constant K with ||profile(x) - .||_{p/(p-1), cross-section} =
// K * w(x): the closed-form Hoelder constant for the 2D families, a radial
// quadrature at x = 1 for PolyCuspND with N >= 3 (exact by scaling
// homogeneity).
double certificate_constant(const FamilyParams& params, double p);

// LB(eps) = K^{-p} * int_eps^{x_max} (A(x)/w(x))^p dx.  For every
// u in (W^{1,p}_0)^N with div u = f, ||grad u||_p^p >= LB(eps).
double lower_bound(const RhsSpec& rhs, double p, double eps);

// Same bound computed from an arbitrary cumulative-flux function (used by the
// synthetic-field functional-inequality checks).
double lower_bound_from_A(const DomainSpec& domain, double p,
                          const std::function<double(double)>& A, double eps);

struct CurveVerdict {
    bool diverges = false;
    RateKind model = RateKind::Convergent;  // Power or Logarithmic when diverging
    double rate = 0.0;                      // fitted beta for the power model
    double limit_estimate = 0.0;            // last LB value when converging
};

struct CertificateCurve {
    std::vector<double> eps_grid;   // decreasing
    std::vector<double> lb_values;  // nondecreasing along the grid
    CurveVerdict verdict;
    double fitted_rate = 0.0;        // -d ln LB / d ln eps on the smallest decade
    double power_residual = 0.0;     // rms ln-space misfit of the power fit
    double log_residual = 0.0;       // rms relative misfit of LB ~ a + b ln(1/eps)
};

// Sweeps lower_bound over the grid (entries evaluated in parallel, reduction
// order fixed), fits the blow-up rate on the smallest decade and decides the
// verdict: converged when the relative change across the last two grid points
// is below 0.1%, otherwise diverging with the better-fitting model.
CertificateCurve certificate_curve(const RhsSpec& rhs, double p,
                                   const std::vector<double>& eps_grid);

std::vector<double> dyadic_eps_grid(int k_min = 4, int k_max = 20);

// CSV: "epsilon,lower_bound" rows; TSV: two columns for plotting; the JSON
// sidecar carries the fit diagnostics.
void write_certificate_csv(const CertificateCurve& curve, const std::string& path);
void write_certificate_tsv(const CertificateCurve& curve, const std::string& path);
nlohmann::json certificate_sidecar(const RhsSpec& rhs, double p, const CertificateCurve& curve);

}  // namespace cuspdiv

#endif
