#ifndef CUSPDIV_QUADRATURE_HPP
#define CUSPDIV_QUADRATURE_HPP

#include <functional>

namespace cuspdiv::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // absolute error estimate
    long evaluations = 0;
    bool converged = false;
};

using Fn = std::function<double(double)>;

// Adaptive bisection with an embedded Gauss(7)/Kronrod(15) error estimate.
Result integrate(const Fn& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0,
                 int max_intervals = 4000);

// ∫_0^b f, f possibly singular (but integrable) at 0: the interval is split
// at dyadic points b, b/2, b/4, ... toward 0 and each piece integrated
// adaptively until the tail contribution is below tolerance.
Result integrate_to_zero(const Fn& f, double b,
                         double rel_tol = 1e-10, int max_splits = 2000);

// ∫_T^∞ g(t) dt for g decaying like e^{-c t}: integrated over consecutive
// windows of length ~40/c until a window is negligible.
Result integrate_exp_tail(const Fn& g, double T, double decay_rate,
                          double rel_tol = 1e-10);

// Throwing wrappers: return .value, raise QuadratureError when not converged.
double integrate_or_throw(const Fn& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0);
double integrate_to_zero_or_throw(const Fn& f, double b, double rel_tol = 1e-10);

}  // namespace cuspdiv::quad

#endif
