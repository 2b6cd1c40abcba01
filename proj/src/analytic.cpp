#include "cuspdiv/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "cuspdiv/errors.hpp"

namespace cuspdiv {
namespace {

constexpr double kEndpointTol = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void validate_p(double p) {
    require(std::isfinite(p) && p > 1.0, "Lebesgue exponent p must be finite and > 1");
}

}  // namespace

FamilyParams FamilyParams::poly2d(double m, double p) {
    validate_p(p);
    require(std::isfinite(m) && m > 0.0, "cusp power m must be finite and > 0");
    FamilyParams fp;
    fp.family = Family::PolyCusp2D;
    fp.m = m;
    fp.dim = 2;
    fp.p = p;
    return fp;
}

FamilyParams FamilyParams::polyNd(double m, int N, double p) {
    validate_p(p);
    require(std::isfinite(m) && m > 0.0, "cusp power m must be finite and > 0");
    require(N >= 2, "space dimension N must be >= 2");
    FamilyParams fp;
    fp.family = Family::PolyCuspND;
    fp.m = m;
    fp.dim = N;
    fp.p = p;
    return fp;
}

FamilyParams FamilyParams::log2d(double r, double p) {
    validate_p(p);
    require(std::isfinite(r), "log exponent r must be finite");
    FamilyParams fp;
    fp.family = Family::LogCusp2D;
    fp.r = r;
    fp.dim = 2;
    fp.p = p;
    return fp;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::NotInLp: return "not_in_Lp";
        case Classification::CertifiedNonexistence: return "certified_nonexistence";
        case Classification::NoConclusion: return "no_conclusion";
    }
    return "?";
}

std::string to_string(RateKind k) {
    switch (k) {
        case RateKind::Convergent: return "convergent";
        case RateKind::Power: return "power";
        case RateKind::Logarithmic: return "logarithmic";
        case RateKind::LogPower: return "log_power";
        case RateKind::DoubleLog: return "double_log";
    }
    return "?";
}

double cusp_range_max(const FamilyParams& params) {
    return params.family == Family::LogCusp2D ? 0.5 : 1.0;
}

ExponentReport thresholds(const FamilyParams& params) {
    ExponentReport rep;
    switch (params.family) {
        case Family::PolyCusp2D:
            rep.t1 = (-params.m - 1.0) / params.p;
            rep.t2 = rep.t1 + params.m - 1.0;
            break;
        case Family::PolyCuspND:
            if (params.dim == 2) {
                // Same formulas as the planar family; keep one code path.
                return thresholds(FamilyParams::poly2d(params.m, params.p));
            }
            rep.t1 = (-1.0 - params.m * (params.dim - 1)) / params.p;
            rep.t2 = rep.t1 + params.m - 1.0;
            break;
        case Family::LogCusp2D:
            rep.t1 = -params.r / params.p;
            rep.t2 = -params.r / params.p + params.r;
            break;
    }
    rep.interval_empty = !(rep.t2 > rep.t1);
    return rep;
}

Classification classify(const FamilyParams& params, double alpha) {
    const ExponentReport rep = thresholds(params);
    if (alpha <= rep.t1) return Classification::NotInLp;
    if (alpha <= rep.t2) return Classification::CertifiedNonexistence;
    return Classification::NoConclusion;
}

double certificate_integrand_exponent(const FamilyParams& params, double alpha) {
    const double p = params.p;
    switch (params.family) {
        case Family::PolyCusp2D:
            return p * (alpha + params.m + 1.0) - params.m * (2.0 * p - 1.0);
        case Family::PolyCuspND: {
            if (params.dim == 2)
                return certificate_integrand_exponent(FamilyParams::poly2d(params.m, p), alpha);
            const double N = params.dim;
            return p * (alpha + params.m * (N - 1.0) + 1.0) -
                   (params.m * (2.0 * p - 1.0) + params.m * (p - 1.0) * (N - 2.0));
        }
        case Family::LogCusp2D:
            return -1.0 + params.r * (p - 1.0) - alpha * p;
    }
    return 0.0;
}

DivergenceRate divergence_exponent(const FamilyParams& params, double alpha) {
    const ExponentReport rep = thresholds(params);
    if (!(alpha > rep.t1))
        throw NotAdmissibleError("alpha <= t1: f is not in L^p, certificate not meaningful");

    const double e = certificate_integrand_exponent(params, alpha);
    // The endpoint e = -1 corresponds exactly to alpha = t2; detect it by the
    // threshold first and only then by the 1e-12 tolerance on e.
    const bool at_endpoint = (alpha == rep.t2) || std::abs(e + 1.0) <= kEndpointTol;

    DivergenceRate rate;
    if (params.family == Family::LogCusp2D) {
        if (at_endpoint) {
            rate.kind = RateKind::DoubleLog;
        } else if (e < -1.0) {
            rate.kind = RateKind::Convergent;
        } else {
            rate.kind = RateKind::LogPower;
            rate.exponent = e + 1.0;
        }
    } else {
        if (at_endpoint) {
            rate.kind = RateKind::Logarithmic;
        } else if (e > -1.0) {
            rate.kind = RateKind::Convergent;
        } else {
            rate.kind = RateKind::Power;
            rate.exponent = -(e + 1.0);
        }
    }
    return rate;
}

double hoelder_constant(double p) {
    validate_p(p);
    return std::pow(2.0, (2.0 * p - 1.0) / p) *
           std::pow((p - 1.0) / (2.0 * p - 1.0), (p - 1.0) / p);
}

double hoelder_weight_exponent(const FamilyParams& params) {
    const double p = params.p;
    switch (params.family) {
        case Family::PolyCusp2D:
            return params.m * (2.0 * p - 1.0) / p;
        case Family::PolyCuspND:
            if (params.dim == 2) return params.m * (2.0 * p - 1.0) / p;
            return (params.m * (2.0 * p - 1.0) + params.m * (p - 1.0) * (params.dim - 2)) / p;
        case Family::LogCusp2D:
            return (2.0 * p - 1.0) / p;
    }
    return 0.0;
}

double hoelder_weight(const FamilyParams& params, double x) {
    const double x_max = cusp_range_max(params);
    if (!(x > 0.0 && x < x_max))
        throw std::domain_error("hoelder_weight: x outside the cusp range");
    const double xe = std::pow(x, hoelder_weight_exponent(params));
    if (params.family == Family::LogCusp2D)
        return xe * std::pow(-std::log(x), -params.r * (2.0 * params.p - 1.0) / params.p);
    return xe;
}

}  // namespace cuspdiv
