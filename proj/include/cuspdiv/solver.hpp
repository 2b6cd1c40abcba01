#ifndef CUSPDIV_SOLVER_HPP
#define CUSPDIV_SOLVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "cuspdiv/mac_grid.hpp"
#include "cuspdiv/rhs.hpp"

namespace cuspdiv {

struct SolveOptions {
    double outer_tol = 1e-8;   // relative residual of the pressure iteration
    double inner_tol = 1e-10;  // relative residual of the component solves
    int outer_cap = 2000;
    int inner_cap = 800;
};

struct DiscreteSolveResult {
    std::vector<double> u;  // (nx+1)*ny lattice, zero at inactive faces
    std::vector<double> v;  // nx*(ny+1)
    double gradient_norm = 0.0;  // sqrt(u^T A u), the discrete ||grad u||_2
    double div_residual = 0.0;   // max cell-wise |B u - f|
    int outer_iterations = 0;
    long long inner_iterations = 0;
    double eps = 0.0, h = 0.0;
};

// Minimizes u^T A u (A = component-wise 5-point gradient energy with zero
// exterior values) subject to the MAC divergence constraint B u = f-bar,
// where f-bar is f sampled at interior cell centers and shifted to exact
// discrete zero mean (compensated summation).  Outer: conjugate gradients on
// the cell-pressure multiplier with zero-mean projection and diagonal
// scaling; each outer application solves the two SPD component systems by
// multigrid-preconditioned conjugate gradients.
DiscreteSolveResult solve_min_norm(const MacGrid& grid,
                                   const std::function<double(double, double)>& f,
                                   const SolveOptions& opts = {});

DiscreteSolveResult solve_min_norm(const MacGrid& grid, const RhsSpec& rhs,
                                   const SolveOptions& opts = {});

// Discrete MAC divergence of (u, v): (du + dv)/h per interior cell.
std::vector<double> mac_divergence(const MacGrid& grid, const std::vector<double>& u,
                                   const std::vector<double>& v);

// Gradient energy u^T A u + v^T A v of a face field pair.
double gradient_energy(const MacGrid& grid, const std::vector<double>& u,
                       const std::vector<double>& v);

struct HRule {
    double width_fraction = 0.25;  // h = width_fraction * width(eps)
    double fixed_h = 0.0;          // used instead when > 0
    double h_for(const DomainSpec& spec, double eps) const;
};

struct SweepRow {
    double eps = 0.0, h = 0.0;
    int nx = 0, ny = 0;
    long long cells = 0, faces = 0;
    double gradient_norm = 0.0;
    double lb_sqrt = 0.0;  // sqrt(LB(2 eps)) with the truncated-domain flux
    double ratio = 0.0;    // gradient_norm / lb_sqrt
    int outer_iterations = 0;
    long long inner_iterations = 0;
    double div_residual = 0.0;
    double seconds = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fitted_rate = 0.0;  // log-log slope of gradient_norm against eps
};

// Truncates the domain at each eps, rebuilds the zero-mean rhs on Omega_eps,
// solves, and compares against the certificate bound.  p = 2 only (the
// quadratic minimal-norm problem is the one with a trustworthy dense oracle).
SweepResult blowup_sweep(const DomainSpec& spec, double alpha,
                         const std::vector<double>& eps_list, const HRule& h_rule = {},
                         const SolveOptions& opts = {});

void write_sweep_csv(const SweepResult& sweep, const std::string& path);

// Raw dump of the face fields (magic, nx, ny, u, v as binary doubles).
void write_velocity_dump(const MacGrid& grid, const DiscreteSolveResult& result,
                         const std::string& path);

}  // namespace cuspdiv

#endif
