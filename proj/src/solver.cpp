#include "cuspdiv/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cuspdiv/certificate.hpp"
#include "cuspdiv/csvio.hpp"
#include "cuspdiv/errors.hpp"
#include "cuspdiv/kernels.hpp"
#include "cuspdiv/multigrid.hpp"
#include "cuspdiv/ratefit.hpp"

namespace cuspdiv {
namespace {

// gradient of a cell field onto active faces: (Bt q)_face = q_W - q_E.
void apply_div_transpose(const MacGrid& g, const double* q, double* gu, double* gv) {
    const int nx = g.nx, ny = g.ny;
    const bool par = g.cell.size() > 16384;
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const size_t s = g.uface_index(i, j);
            gu[s] = g.uface[s] ? q[g.cell_index(i - 1, j)] - q[g.cell_index(i, j)] : 0.0;
        }
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t s = g.vface_index(i, j);
            gv[s] = g.vface[s] ? q[g.cell_index(i, j - 1)] - q[g.cell_index(i, j)] : 0.0;
        }
}

// MAC divergence without the 1/h factor, masked to interior cells.
void apply_div(const MacGrid& g, const double* u, const double* v, double* d) {
    const int nx = g.nx, ny = g.ny;
#pragma omp parallel for schedule(static) if (g.cell.size() > 16384)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t c = g.cell_index(i, j);
            if (!g.cell[c]) {
                d[c] = 0.0;
                continue;
            }
            d[c] = u[g.uface_index(i + 1, j)] - u[g.uface_index(i, j)] +
                   v[g.vface_index(i, j + 1)] - v[g.vface_index(i, j)];
        }
}

void project_zero_mean(const MacGrid& g, double* q) {
    const double mean =
        kernels::sum_kahan(q, g.cell.size()) / static_cast<double>(g.n_cells);
    const size_t n = g.cell.size();
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        if (g.cell[k]) q[k] -= mean;
}

}  // namespace

std::vector<double> mac_divergence(const MacGrid& g, const std::vector<double>& u,
                                   const std::vector<double>& v) {
    std::vector<double> d(g.cell.size(), 0.0);
    apply_div(g, u.data(), v.data(), d.data());
    const double inv_h = 1.0 / g.h;
    kernels::scale(inv_h, d.data(), d.size());
    return d;
}

double gradient_energy(const MacGrid& g, const std::vector<double>& u,
                       const std::vector<double>& v) {
    std::vector<double> tmp(std::max(u.size(), v.size()));
    kernels::masked_laplacian_5pt(g.uface.data(), u.data(), tmp.data(), g.nx + 1, g.ny);
    const double eu = kernels::dot(u.data(), tmp.data(), u.size());
    kernels::masked_laplacian_5pt(g.vface.data(), v.data(), tmp.data(), g.nx, g.ny + 1);
    const double ev = kernels::dot(v.data(), tmp.data(), v.size());
    return eu + ev;
}

DiscreteSolveResult solve_min_norm(const MacGrid& g,
                                   const std::function<double(double, double)>& f,
                                   const SolveOptions& opts) {
    const size_t ncell = g.cell.size();
    const size_t nu = g.uface.size();
    const size_t nv = g.vface.size();

    // f at interior cell centers, shifted to exact discrete zero mean.
    std::vector<double> fbar(ncell, 0.0);
#pragma omp parallel for schedule(static) if (ncell > 16384)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const size_t c = g.cell_index(i, j);
            if (g.cell[c]) fbar[c] = f(g.cx(i), g.cy(j));
        }
    const double fmax = kernels::max_abs(fbar.data(), ncell);
    for (int pass = 0; pass < 2; ++pass) project_zero_mean(g, fbar.data());
    {
        // final one-cell correction so the compensated sum is exactly zero
        const double rest = kernels::sum_kahan(fbar.data(), ncell);
        for (size_t k = 0; k < ncell; ++k)
            if (g.cell[k]) {
                fbar[k] -= rest;
                break;
            }
    }

    DiscreteSolveResult res;
    res.h = g.h;
    res.u.assign(nu, 0.0);
    res.v.assign(nv, 0.0);

    // constraint right-hand side g = h * fbar
    std::vector<double> rhs(ncell);
    kernels::copy(fbar.data(), rhs.data(), ncell);
    kernels::scale(g.h, rhs.data(), ncell);

    const double gnorm2 = std::sqrt(kernels::dot(rhs.data(), rhs.data(), ncell));
    if (gnorm2 == 0.0) {
        res.div_residual = 0.0;
        return res;  // f == 0 -> u == 0
    }

    MaskedPoissonSolver solver_u(g.nx + 1, g.ny, g.uface);
    MaskedPoissonSolver solver_v(g.nx, g.ny + 1, g.vface);

    // diagonal scaling of the Schur operator: d_c = (active faces of c) / 4
    std::vector<double> pre_diag(ncell, 1.0);
#pragma omp parallel for schedule(static) if (ncell > 16384)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const size_t c = g.cell_index(i, j);
            if (!g.cell[c]) continue;
            const int deg = g.uface[g.uface_index(i, j)] + g.uface[g.uface_index(i + 1, j)] +
                            g.vface[g.vface_index(i, j)] + g.vface[g.vface_index(i, j + 1)];
            pre_diag[c] = deg > 0 ? 4.0 / deg : 1.0;
        }

    std::vector<double> lambda(ncell, 0.0), r(ncell), z(ncell), p(ncell), sp(ncell);
    std::vector<double> bu(nu), bv(nv), zu(nu), zv(nv);

    // r = -g - S*0
    kernels::copy(rhs.data(), r.data(), ncell);
    kernels::scale(-1.0, r.data(), ncell);
    project_zero_mean(g, r.data());

    auto precondition = [&](const double* in, double* out) {
        const size_t n = ncell;
#pragma omp parallel for schedule(static) if (n > 16384)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
            out[k] = g.cell[k] ? in[k] * pre_diag[k] : 0.0;
        project_zero_mean(g, out);
    };

    precondition(r.data(), z.data());
    kernels::copy(z.data(), p.data(), ncell);
    double rz = kernels::dot(r.data(), z.data(), ncell);

    const double div_target = opts.outer_tol * g.h * (1.0 + fmax);
    bool converged = false;

    for (int it = 1; it <= opts.outer_cap; ++it) {
        // S p = B A^{-1} Bt p
        apply_div_transpose(g, p.data(), bu.data(), bv.data());
        res.inner_iterations +=
            solver_u.solve(bu.data(), zu.data(), opts.inner_tol, opts.inner_cap);
        res.inner_iterations +=
            solver_v.solve(bv.data(), zv.data(), opts.inner_tol, opts.inner_cap);
        apply_div(g, zu.data(), zv.data(), sp.data());
        project_zero_mean(g, sp.data());

        const double psp = kernels::dot(p.data(), sp.data(), ncell);
        if (!(psp > 0.0))
            throw NonConvergenceError("outer CG: Schur operator not positive on the current direction",
                                      psp, it);
        const double alpha = rz / psp;
        kernels::axpy(alpha, p.data(), lambda.data(), ncell);
        kernels::axpy(-alpha, zu.data(), res.u.data(), nu);
        kernels::axpy(-alpha, zv.data(), res.v.data(), nv);
        kernels::axpy(-alpha, sp.data(), r.data(), ncell);
        project_zero_mean(g, r.data());
        res.outer_iterations = it;

        const double rl2 = std::sqrt(kernels::dot(r.data(), r.data(), ncell));
        if (rl2 <= opts.outer_tol * gnorm2) {
            const double rinf = kernels::max_abs(r.data(), ncell);
            if (rinf <= div_target) {
                converged = true;
                break;
            }
        }
        precondition(r.data(), z.data());
        const double rz_new = kernels::dot(r.data(), z.data(), ncell);
        kernels::xpay(z.data(), rz_new / rz, p.data(), ncell);
        rz = rz_new;
    }

    if (!converged) {
        const double rl2 = std::sqrt(kernels::dot(r.data(), r.data(), ncell));
        throw NonConvergenceError("pressure iteration exceeded the cap (relative residual " +
                                      format_double(rl2 / gnorm2) + ")",
                                  rl2 / gnorm2, res.outer_iterations);
    }

    // honest feasibility check from the accumulated velocity itself
    apply_div(g, res.u.data(), res.v.data(), sp.data());
    kernels::axpy(-1.0, rhs.data(), sp.data(), ncell);
    res.div_residual = kernels::max_abs(sp.data(), ncell) / g.h;

    std::vector<double> tmp(std::max(nu, nv));
    solver_u.apply(res.u.data(), tmp.data());
    double energy = kernels::dot(res.u.data(), tmp.data(), nu);
    solver_v.apply(res.v.data(), tmp.data());
    energy += kernels::dot(res.v.data(), tmp.data(), nv);
    res.gradient_norm = std::sqrt(std::max(energy, 0.0));
    return res;
}

DiscreteSolveResult solve_min_norm(const MacGrid& g, const RhsSpec& rhs, const SolveOptions& opts) {
    DiscreteSolveResult res =
        solve_min_norm(g, [&rhs](double x, double y) { return rhs.evaluate(x, y); }, opts);
    res.eps = rhs.domain.cut();
    return res;
}

double HRule::h_for(const DomainSpec& spec, double eps) const {
    if (fixed_h > 0.0) return fixed_h;
    return width_fraction * spec.width(eps);
}

SweepResult blowup_sweep(const DomainSpec& spec, double alpha,
                         const std::vector<double>& eps_list, const HRule& h_rule,
                         const SolveOptions& opts) {
    if (spec.params().p != 2.0)
        throw std::invalid_argument("blowup_sweep: the discrete oracle runs at p = 2 only");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("blowup_sweep: eps_list must be strictly decreasing");

    SweepResult sweep;
    for (double eps : eps_list) {
        const auto t0 = std::chrono::steady_clock::now();
        const DomainSpec trunc = spec.truncate(eps);
        const double h = h_rule.h_for(spec, eps);
        const MacGrid grid = build_grid(trunc, h);
        const RhsSpec rhs_eps = make_rhs(trunc, alpha);
        DiscreteSolveResult sol = solve_min_norm(grid, rhs_eps, opts);

        SweepRow row;
        row.eps = eps;
        row.h = h;
        row.nx = grid.nx;
        row.ny = grid.ny;
        row.cells = grid.n_cells;
        row.faces = grid.unknowns();
        row.gradient_norm = sol.gradient_norm;
        row.div_residual = sol.div_residual;
        row.outer_iterations = sol.outer_iterations;
        row.inner_iterations = sol.inner_iterations;
        if (2.0 * eps < spec.x_max()) {
            row.lb_sqrt = std::sqrt(lower_bound(rhs_eps, 2.0, 2.0 * eps));
            row.ratio = row.lb_sqrt > 0.0 ? row.gradient_norm / row.lb_sqrt : 0.0;
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        sweep.rows.push_back(row);
    }

    if (sweep.rows.size() >= 2) {
        std::vector<double> eps_v, gn_v;
        for (const SweepRow& row : sweep.rows) {
            if (row.gradient_norm > 0.0) {
                eps_v.push_back(row.eps);
                gn_v.push_back(row.gradient_norm);
            }
        }
        if (eps_v.size() >= 2) sweep.fitted_rate = -fit_loglog(eps_v, gn_v).slope;
    }
    return sweep;
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::string out = "eps,h,gradient_norm,lb_sqrt,ratio,iterations\n";
    for (const SweepRow& row : sweep.rows) {
        out += join_csv({format_double(row.eps), format_double(row.h),
                         format_double(row.gradient_norm), format_double(row.lb_sqrt),
                         format_double(row.ratio), std::to_string(row.outer_iterations)});
        out.push_back('\n');
    }
    write_text_file(path, out);
}

void write_velocity_dump(const MacGrid& grid, const DiscreteSolveResult& result,
                         const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const char magic[8] = {'c', 'u', 's', 'p', 'd', 'v', '0', '1'};
    f.write(magic, 8);
    const int32_t dims[2] = {grid.nx, grid.ny};
    f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    f.write(reinterpret_cast<const char*>(result.u.data()),
            static_cast<std::streamsize>(result.u.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(result.v.data()),
            static_cast<std::streamsize>(result.v.size() * sizeof(double)));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace cuspdiv
