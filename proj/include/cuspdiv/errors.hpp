#ifndef CUSPDIV_ERRORS_HPP
#define CUSPDIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cuspdiv {

// Right-hand side not admissible for the requested operation (alpha at or
// below the L^p threshold t1).
struct NotAdmissibleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Grid cannot resolve the cusp at the cut abscissa (width(eps) < h).
struct UnderResolvedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interior-cell graph of a masked grid is not connected.
struct DisconnectedInteriorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration cap hit in the constrained minimum-norm solver.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, double residual, long long iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    long long iterations;
};

// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cuspdiv

#endif
