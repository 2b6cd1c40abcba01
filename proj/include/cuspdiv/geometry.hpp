#ifndef CUSPDIV_GEOMETRY_HPP
#define CUSPDIV_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cuspdiv/analytic.hpp"

namespace cuspdiv {

struct Point {
    std::vector<double> coords;

    static Point xy(double x, double y) { return Point{{x, y}}; }
    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[static_cast<size_t>(i)]; }
};

// A concrete cusp domain: the cusp part {0 < x < x_max, |y_perp| < width(x)}
// closed by a cap region meeting it continuously at x = x_max.  Open-set
// convention throughout: boundary points are outside.  A nonzero cut value
// restricts to Omega_eps = Omega intersected with {x > cut} (zero boundary
// data on the cut face).
class DomainSpec {
public:
    static DomainSpec make(const FamilyParams& params);

    const FamilyParams& params() const { return params_; }
    double cut() const { return cut_; }
    double x_max() const { return x_max_; }
    double cap_end() const { return cap_end_; }      // domain ends at x = cap_end
    double cap_radius() const { return cap_radius_; }  // disc radius (2D families)

    // Half-width (2D) or cross-section radius (ND) of the cusp part.
    double width(double x) const;
    double width_derivative(double x) const;

    bool contains(const Point& pt) const;  // throws on dimension mismatch
    bool contains(double x, double y) const;

    // (N-1)-dimensional measure of the cusp cross-section at abscissa x.
    double cross_section_measure(double x) const;

    // Integral of cross_section_measure over (lo, hi) intersected with
    // (cut, x_max); closed form for poly families, adaptive quadrature
    // (relative error <= 1e-10) for the log family.
    double cusp_volume(double lo, double hi) const;

    double cap_volume() const;
    double volume() const;  // cusp part above the cut, plus the cap

    DomainSpec truncate(double eps) const;  // throws on eps outside (0, x_max)

    nlohmann::json to_json() const;
    static DomainSpec from_json(const nlohmann::json& j, double p);

private:
    FamilyParams params_;
    double cut_ = 0.0;
    double x_max_ = 1.0;
    double cap_end_ = 2.0;
    double cap_radius_ = 1.0;
};

// Hit-or-miss Monte Carlo measure estimation.  The sample budget is split
// over a fixed number of substreams derived from the seed, so estimates are
// deterministic and independent of the thread count.
struct McRegion {
    enum class Kind { CrossSection, Slab };
    Kind kind = Kind::CrossSection;
    double x = 0.0;        // cross-section abscissa
    double lo = 0.0, hi = 0.0;  // slab range

    static McRegion cross_section(double x);
    static McRegion slab(double lo, double hi);
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

McEstimate mc_measure(const DomainSpec& spec, const McRegion& region, long long n,
                      uint64_t seed);

// Volume of the unit ball in R^k (V_0 = 1, V_1 = 2, V_2 = pi, ...).
double unit_ball_volume(int k);

}  // namespace cuspdiv

#endif
