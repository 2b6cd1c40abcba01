#include "cuspdiv/multigrid.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "cuspdiv/errors.hpp"
#include "cuspdiv/kernels.hpp"

namespace cuspdiv {
namespace {

constexpr int kCoarsestSweepPairs = 30;
constexpr long long kCoarsestTarget = 64;

// Piecewise-constant Galerkin coarsening doubles the effective coarse
// operator in 2D relative to the consistent (2h) discretization; the coarse
// correction is rescaled accordingly (equivalent to A_c = P^T A P / 2).
constexpr double kCoarseScale = 0.5;
constexpr int kSmoothSweeps = 2;

inline size_t idx(int i, int j, int nx) { return static_cast<size_t>(j) * nx + i; }

}  // namespace

MaskedPoissonSolver::MaskedPoissonSolver(int nx, int ny, std::vector<uint8_t> mask) {
    if (mask.size() != static_cast<size_t>(nx) * ny)
        throw std::invalid_argument("MaskedPoissonSolver: mask size mismatch");
    Level fine;
    fine.nx = nx;
    fine.ny = ny;
    fine.mask = std::move(mask);
    levels_.push_back(std::move(fine));

    // Build the Galerkin hierarchy with piecewise-constant transfer.
    while (true) {
        const Level& f = levels_.back();
        long long active = 0;
        for (uint8_t m : f.mask) active += m;
        if (active <= kCoarsestTarget || (f.nx <= 4 && f.ny <= 4) || levels_.size() >= 20) break;

        Level c;
        c.nx = (f.nx + 1) / 2;
        c.ny = (f.ny + 1) / 2;
        c.mask.assign(static_cast<size_t>(c.nx) * c.ny, 0);
        c.diag.assign(c.mask.size(), 0.0);
        c.w_east.assign(c.mask.size(), 0.0);
        c.w_north.assign(c.mask.size(), 0.0);

        const bool fine_is_unit = f.diag.empty();
        auto fmask = [&](int i, int j) -> bool {
            return i >= 0 && i < f.nx && j >= 0 && j < f.ny && f.mask[idx(i, j, f.nx)];
        };
        auto fdiag = [&](int i, int j) -> double {
            return fine_is_unit ? 4.0 : f.diag[idx(i, j, f.nx)];
        };
        auto fe = [&](int i, int j) -> double {  // coupling (i,j)-(i+1,j)
            if (!fmask(i, j) || !fmask(i + 1, j)) return 0.0;
            return fine_is_unit ? 1.0 : f.w_east[idx(i, j, f.nx)];
        };
        auto fn = [&](int i, int j) -> double {  // coupling (i,j)-(i,j+1)
            if (!fmask(i, j) || !fmask(i, j + 1)) return 0.0;
            return fine_is_unit ? 1.0 : f.w_north[idx(i, j, f.nx)];
        };

        for (int J = 0; J < c.ny; ++J) {
            for (int I = 0; I < c.nx; ++I) {
                const int i0 = 2 * I, j0 = 2 * J;
                double diag = 0.0;
                bool any = false;
                for (int dj = 0; dj < 2; ++dj)
                    for (int di = 0; di < 2; ++di)
                        if (fmask(i0 + di, j0 + dj)) {
                            any = true;
                            diag += fdiag(i0 + di, j0 + dj);
                        }
                if (!any) continue;
                // internal edges of the 2x2 block
                diag -= 2.0 * (fe(i0, j0) + fe(i0, j0 + 1) + fn(i0, j0) + fn(i0 + 1, j0));
                const size_t ci = idx(I, J, c.nx);
                c.mask[ci] = 1;
                c.diag[ci] = kCoarseScale * diag;
                // couplings across the east and north block interfaces
                c.w_east[ci] = kCoarseScale * (fe(i0 + 1, j0) + fe(i0 + 1, j0 + 1));
                c.w_north[ci] = kCoarseScale * (fn(i0, j0 + 1) + fn(i0 + 1, j0 + 1));
            }
        }
        levels_.push_back(std::move(c));
    }

    for (Level& l : levels_) {
        const size_t n = l.mask.size();
        l.b.assign(n, 0.0);
        l.x.assign(n, 0.0);
        l.r.assign(n, 0.0);
    }
}

size_t MaskedPoissonSolver::fine_size() const { return levels_[0].mask.size(); }

void MaskedPoissonSolver::apply(const double* x, double* y) const { apply_level(0, x, y); }

void MaskedPoissonSolver::apply_level(int l, const double* x, double* y) const {
    const Level& lv = levels_[l];
    if (l == 0) {
        kernels::masked_laplacian_5pt(lv.mask.data(), x, y, lv.nx, lv.ny);
        return;
    }
    const int nx = lv.nx, ny = lv.ny;
#pragma omp parallel for schedule(static) if (static_cast<size_t>(nx) * ny > 16384)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const size_t s = idx(i, j, nx);
            if (!lv.mask[s]) {
                y[s] = 0.0;
                continue;
            }
            double v = lv.diag[s] * x[s];
            if (i + 1 < nx) v -= lv.w_east[s] * x[s + 1];
            if (i > 0) v -= lv.w_east[s - 1] * x[s - 1];
            if (j + 1 < ny) v -= lv.w_north[s] * x[s + nx];
            if (j > 0) v -= lv.w_north[s - nx] * x[s - nx];
            y[s] = v;
        }
    }
}

void MaskedPoissonSolver::smooth_level(int l, const double* b, double* x, bool reverse) const {
    const Level& lv = levels_[l];
    const int nx = lv.nx, ny = lv.ny;
    const bool unit = lv.diag.empty();
    const bool par = static_cast<size_t>(nx) * ny > 16384;
    for (int pass = 0; pass < 2; ++pass) {
        const int color = reverse ? 1 - pass : pass;
#pragma omp parallel for schedule(static) if (par)
        for (int j = 0; j < ny; ++j) {
            for (int i = (j + color) & 1; i < nx; i += 2) {
                const size_t s = idx(i, j, nx);
                if (!lv.mask[s]) continue;
                double acc = b[s];
                double diag;
                if (unit) {
                    if (i > 0 && lv.mask[s - 1]) acc += x[s - 1];
                    if (i + 1 < nx && lv.mask[s + 1]) acc += x[s + 1];
                    if (j > 0 && lv.mask[s - nx]) acc += x[s - nx];
                    if (j + 1 < ny && lv.mask[s + nx]) acc += x[s + nx];
                    diag = 4.0;
                } else {
                    if (i > 0) acc += lv.w_east[s - 1] * x[s - 1];
                    if (i + 1 < nx) acc += lv.w_east[s] * x[s + 1];
                    if (j > 0) acc += lv.w_north[s - nx] * x[s - nx];
                    if (j + 1 < ny) acc += lv.w_north[s] * x[s + nx];
                    diag = lv.diag[s];
                }
                x[s] = acc / diag;
            }
        }
    }
}

void MaskedPoissonSolver::vcycle(int l) const {
    const Level& lv = levels_[l];
    kernels::fill(0.0, lv.x.data(), lv.x.size());

    if (l + 1 == static_cast<int>(levels_.size())) {
        for (int k = 0; k < kCoarsestSweepPairs; ++k) {
            smooth_level(l, lv.b.data(), lv.x.data(), false);
            smooth_level(l, lv.b.data(), lv.x.data(), true);
        }
        return;
    }

    for (int s = 0; s < kSmoothSweeps; ++s) smooth_level(l, lv.b.data(), lv.x.data(), false);

    // residual and restriction (sum over the 2x2 children)
    apply_level(l, lv.x.data(), lv.r.data());
    const size_t n = lv.mask.size();
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        lv.r[k] = lv.mask[k] ? lv.b[k] - lv.r[k] : 0.0;

    const Level& cv = levels_[l + 1];
#pragma omp parallel for schedule(static) if (cv.mask.size() > 16384)
    for (int J = 0; J < cv.ny; ++J) {
        for (int I = 0; I < cv.nx; ++I) {
            const size_t ci = idx(I, J, cv.nx);
            if (!cv.mask[ci]) {
                cv.b[ci] = 0.0;
                continue;
            }
            double s = 0.0;
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const int fi = 2 * I + di, fj = 2 * J + dj;
                    if (fi < lv.nx && fj < lv.ny) s += lv.r[idx(fi, fj, lv.nx)];
                }
            cv.b[ci] = s;
        }
    }

    vcycle(l + 1);

    // prolong (inject) and correct
#pragma omp parallel for schedule(static) if (n > 16384)
    for (int j = 0; j < lv.ny; ++j) {
        for (int i = 0; i < lv.nx; ++i) {
            const size_t s = idx(i, j, lv.nx);
            if (!lv.mask[s]) continue;
            lv.x[s] += cv.x[idx(i / 2, j / 2, cv.nx)];
        }
    }

    for (int s = 0; s < kSmoothSweeps; ++s) smooth_level(l, lv.b.data(), lv.x.data(), true);
}

void MaskedPoissonSolver::precondition(const double* r, double* z) const {
    const Level& lv = levels_[0];
    const size_t n = lv.mask.size();
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        lv.b[k] = lv.mask[k] ? r[k] : 0.0;
    vcycle(0);
    kernels::copy(lv.x.data(), z, n);
}

int MaskedPoissonSolver::solve(const double* b, double* x, double rel_tol, int max_iter) const {
    const size_t n = fine_size();
    std::vector<double> r(n), z(n), p(n), ap(n);

    const Level& lv = levels_[0];
    kernels::fill(0.0, x, n);
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        r[k] = lv.mask[k] ? b[k] : 0.0;

    const double bnorm = std::sqrt(kernels::dot(r.data(), r.data(), n));
    if (bnorm == 0.0) return 0;
    const double target = rel_tol * bnorm;

    precondition(r.data(), z.data());
    kernels::copy(z.data(), p.data(), n);
    double rz = kernels::dot(r.data(), z.data(), n);

    for (int it = 1; it <= max_iter; ++it) {
        apply_level(0, p.data(), ap.data());
        const double pap = kernels::dot(p.data(), ap.data(), n);
        if (pap <= 0.0)
            throw NonConvergenceError("inner CG: operator lost positive definiteness", pap, it);
        const double alpha = rz / pap;
        kernels::axpy(alpha, p.data(), x, n);
        kernels::axpy(-alpha, ap.data(), r.data(), n);
        const double rnorm = std::sqrt(kernels::dot(r.data(), r.data(), n));
        if (rnorm <= target) return it;
        precondition(r.data(), z.data());
        const double rz_new = kernels::dot(r.data(), z.data(), n);
        kernels::xpay(z.data(), rz_new / rz, p.data(), n);
        rz = rz_new;
    }
    throw NonConvergenceError("inner CG exceeded the iteration cap",
                              std::sqrt(kernels::dot(r.data(), r.data(), n)) / bnorm, max_iter);
}

}  // namespace cuspdiv
