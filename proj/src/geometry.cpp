#include "cuspdiv/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "cuspdiv/quadrature.hpp"
#include "cuspdiv/rng.hpp"

namespace cuspdiv {
namespace {

constexpr int kMcChunks = 128;

}  // namespace

double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("unit_ball_volume: k must be >= 0");
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

DomainSpec DomainSpec::make(const FamilyParams& params) {
    DomainSpec d;
    d.params_ = params;
    switch (params.family) {
        case Family::PolyCusp2D:
            d.x_max_ = 1.0;
            d.cap_end_ = 2.0;
            d.cap_radius_ = 1.0;
            break;
        case Family::PolyCuspND:
            d.x_max_ = 1.0;
            d.cap_end_ = 2.0;
            d.cap_radius_ = 1.0;  // cone base radius at x = 1
            break;
        case Family::LogCusp2D: {
            // The profile x(-ln x)^{-r} is strictly increasing on (0, 1/2]
            // iff -ln x > -r there, i.e. r > -ln 2.
            if (!(params.r > -std::numbers::ln2))
                throw std::invalid_argument(
                    "LogCusp2D domain requires r > -ln 2 (profile must increase strictly)");
            d.x_max_ = 0.5;
            d.cap_radius_ = 0.5 * std::pow(std::numbers::ln2, -params.r);
            d.cap_end_ = 0.5 + d.cap_radius_;
            break;
        }
    }
    return d;
}

double DomainSpec::width(double x) const {
    if (!(x > 0.0 && x < x_max_))
        throw std::domain_error("width: x outside the cusp range");
    switch (params_.family) {
        case Family::PolyCusp2D:
        case Family::PolyCuspND:
            return std::pow(x, params_.m);
        case Family::LogCusp2D:
            return x * std::pow(-std::log(x), -params_.r);
    }
    return 0.0;
}

double DomainSpec::width_derivative(double x) const {
    if (!(x > 0.0 && x < x_max_))
        throw std::domain_error("width_derivative: x outside the cusp range");
    switch (params_.family) {
        case Family::PolyCusp2D:
        case Family::PolyCuspND:
            return params_.m * std::pow(x, params_.m - 1.0);
        case Family::LogCusp2D: {
            const double t = -std::log(x);
            return std::pow(t, -params_.r) + params_.r * std::pow(t, -params_.r - 1.0);
        }
    }
    return 0.0;
}

bool DomainSpec::contains(double x, double y) const {
    if (params_.family == Family::PolyCuspND && params_.dim != 2)
        throw std::invalid_argument("contains(x, y): domain is not two-dimensional");
    if (!(x > cut_) || !(x < cap_end_)) return false;
    if (x < x_max_) return std::abs(y) < width(x);
    if (params_.family == Family::PolyCuspND) return std::abs(y) < cap_end_ - x;
    const double cx = x_max_;  // disc center abscissa (1 or 1/2)
    const double dx = x - cx;
    return dx * dx + y * y < cap_radius_ * cap_radius_;
}

bool DomainSpec::contains(const Point& pt) const {
    if (pt.dim() != params_.dim)
        throw std::invalid_argument("contains: point dimension does not match the domain");
    if (params_.dim == 2) return contains(pt[0], pt[1]);
    const double x = pt[0];
    if (!(x > cut_) || !(x < cap_end_)) return false;
    double r2 = 0.0;
    for (int i = 1; i < pt.dim(); ++i) r2 += pt[i] * pt[i];
    const double rad = (x < x_max_) ? width(x) : cap_end_ - x;
    return r2 < rad * rad;
}

double DomainSpec::cross_section_measure(double x) const {
    const double w = width(x);  // range-checks x
    if (params_.dim == 2) return 2.0 * w;
    return unit_ball_volume(params_.dim - 1) * std::pow(w, params_.dim - 1);
}

double DomainSpec::cusp_volume(double lo, double hi) const {
    if (!(lo >= 0.0 && lo < hi && hi <= x_max_))
        throw std::domain_error("cusp_volume: need 0 <= lo < hi <= x_max");
    lo = std::max(lo, cut_);
    if (lo >= hi) return 0.0;
    if (params_.family == Family::LogCusp2D) {
        auto f = [this](double x) { return cross_section_measure(x); };
        if (lo == 0.0) return quad::integrate_to_zero_or_throw(f, hi, 1e-10);
        return quad::integrate_or_throw(f, lo, hi, 1e-10);
    }
    const double q = params_.m * (params_.dim - 1);
    const double coef = params_.dim == 2 ? 2.0 : unit_ball_volume(params_.dim - 1);
    return coef * (std::pow(hi, q + 1.0) - std::pow(lo, q + 1.0)) / (q + 1.0);
}

double DomainSpec::cap_volume() const {
    switch (params_.family) {
        case Family::PolyCusp2D:
        case Family::LogCusp2D:
            return 0.5 * std::numbers::pi * cap_radius_ * cap_radius_;
        case Family::PolyCuspND: {
            // Cone between the cusp mouth at x = 1 and the apex at x = 2;
            // cross-sections have radius 2 - x.
            const int N = params_.dim;
            const double vk = unit_ball_volume(N - 1);
            return quad::integrate_or_throw(
                [N, vk](double x) { return vk * std::pow(2.0 - x, N - 1); }, 1.0, 2.0, 1e-12);
        }
    }
    return 0.0;
}

double DomainSpec::volume() const { return cusp_volume(0.0, x_max_) + cap_volume(); }

DomainSpec DomainSpec::truncate(double eps) const {
    if (!(eps > 0.0 && eps < x_max_))
        throw std::domain_error("truncate: eps outside (0, x_max)");
    DomainSpec d = *this;
    d.cut_ = std::max(cut_, eps);
    return d;
}

nlohmann::json DomainSpec::to_json() const {
    nlohmann::json j;
    switch (params_.family) {
        case Family::PolyCusp2D:
            j["family"] = "poly2d";
            j["m"] = params_.m;
            break;
        case Family::PolyCuspND:
            j["family"] = "polyNd";
            j["m"] = params_.m;
            j["N"] = params_.dim;
            break;
        case Family::LogCusp2D:
            j["family"] = "log2d";
            j["r"] = params_.r;
            break;
    }
    return j;
}

DomainSpec DomainSpec::from_json(const nlohmann::json& j, double p) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "poly2d")
        return make(FamilyParams::poly2d(j.at("m").get<double>(), p));
    if (family == "polyNd")
        return make(FamilyParams::polyNd(j.at("m").get<double>(), j.at("N").get<int>(), p));
    if (family == "log2d")
        return make(FamilyParams::log2d(j.at("r").get<double>(), p));
    throw std::invalid_argument("unknown domain family: " + family);
}

McRegion McRegion::cross_section(double x) {
    McRegion r;
    r.kind = Kind::CrossSection;
    r.x = x;
    return r;
}

McRegion McRegion::slab(double lo, double hi) {
    McRegion r;
    r.kind = Kind::Slab;
    r.lo = lo;
    r.hi = hi;
    return r;
}

McEstimate mc_measure(const DomainSpec& spec, const McRegion& region, long long n,
                      uint64_t seed) {
    if (n < 1) throw std::invalid_argument("mc_measure: n must be >= 1");
    McEstimate est;
    est.samples = n;

    const int N = spec.params().dim;
    double box_vol = 0.0;
    double w_hi = 0.0;
    double lo = 0.0, hi = 0.0;
    bool empty = false;

    if (region.kind == McRegion::Kind::CrossSection) {
        // Clip: outside the (truncated) cusp range the section is empty.
        if (!(region.x > spec.cut() && region.x < spec.x_max())) {
            empty = true;
        } else {
            w_hi = spec.width(region.x);
            box_vol = std::pow(2.0 * w_hi, N - 1);
        }
    } else {
        lo = std::max(region.lo, spec.cut());
        hi = std::min(region.hi, spec.x_max());
        if (!(lo < hi)) {
            empty = true;
        } else {
            w_hi = spec.width(hi * (1.0 - 1e-15));  // width is increasing; bound at hi
            box_vol = (hi - lo) * std::pow(2.0 * w_hi, N - 1);
        }
    }
    if (empty || box_vol == 0.0) return est;

    std::vector<long long> hits(kMcChunks, 0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kMcChunks; ++c) {
        const long long begin = n * c / kMcChunks;
        const long long end = n * (c + 1) / kMcChunks;
        Rng rng(seed, static_cast<uint64_t>(c));
        long long h = 0;
        for (long long s = begin; s < end; ++s) {
            if (region.kind == McRegion::Kind::CrossSection) {
                double r2 = 0.0;
                for (int i = 1; i < N; ++i) {
                    const double y = rng.uniform(-w_hi, w_hi);
                    r2 += y * y;
                }
                if (r2 < w_hi * w_hi) ++h;
            } else {
                const double x = rng.uniform(lo, hi);
                double r2 = 0.0;
                for (int i = 1; i < N; ++i) {
                    const double y = rng.uniform(-w_hi, w_hi);
                    r2 += y * y;
                }
                const double w = spec.width(x);
                if (r2 < w * w) ++h;
            }
        }
        hits[c] = h;
    }

    long long total_hits = 0;
    for (long long h : hits) total_hits += h;
    const double phat = static_cast<double>(total_hits) / static_cast<double>(n);
    est.value = box_vol * phat;
    est.std_error = box_vol * std::sqrt(std::max(phat * (1.0 - phat), 0.0) / static_cast<double>(n));
    return est;
}

}  // namespace cuspdiv
