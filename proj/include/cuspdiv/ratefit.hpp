#ifndef CUSPDIV_RATEFIT_HPP
#define CUSPDIV_RATEFIT_HPP

#include <cstddef>
#include <vector>

namespace cuspdiv {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// Fit ln y ~ a + slope * ln x; rms_residual is in ln units (relative misfit).
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cuspdiv

#endif
