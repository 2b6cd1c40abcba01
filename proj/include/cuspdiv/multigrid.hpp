#ifndef CUSPDIV_MULTIGRID_HPP
#define CUSPDIV_MULTIGRID_HPP

#include <cstdint>
#include <vector>

namespace cuspdiv {

// SPD solver for the masked 5-point graph Laplacian (diagonal 4, couplings 1
// to masked neighbors, Dirichlet zero outside the mask) on an nx*ny lattice.
// Conjugate gradients preconditioned by a geometric V-cycle: piecewise
// constant prolongation, restriction = its transpose, Galerkin-coarsened
// 5-point operators, red-black Gauss-Seidel smoothing (symmetrized).  Every
// reduction uses fixed-chunk deterministic summation, so results are bitwise
// reproducible for any thread count.
class MaskedPoissonSolver {
public:
    MaskedPoissonSolver(int nx, int ny, std::vector<uint8_t> mask);

    // y = A x on the fine level (x, y full-lattice arrays; inactive sites
    // are zeroed in y).
    void apply(const double* x, double* y) const;

    // Solves A x = b to ||r|| <= rel_tol * ||b||; x is overwritten (initial
    // guess zero).  Returns the iteration count.  Throws NonConvergenceError
    // when max_iter is exceeded.
    int solve(const double* b, double* x, double rel_tol, int max_iter) const;

    // One symmetric V-cycle applied to r (for tests/benchmarks).
    void precondition(const double* r, double* z) const;

    int levels() const { return static_cast<int>(levels_.size()); }
    size_t fine_size() const;

private:
    struct Level {
        int nx = 0, ny = 0;
        std::vector<uint8_t> mask;
        // Galerkin coefficients (empty on level 0, where the operator is the
        // constant-coefficient masked stencil):
        std::vector<double> diag;
        std::vector<double> w_east;   // coupling to (i+1, j), 0 when inactive
        std::vector<double> w_north;  // coupling to (i, j+1)
        // workspace
        mutable std::vector<double> b, x, r;
    };

    void apply_level(int l, const double* x, double* y) const;
    void smooth_level(int l, const double* b, double* x, bool reverse) const;
    void vcycle(int l) const;  // solves levels_[l].b into levels_[l].x

    std::vector<Level> levels_;
};

}  // namespace cuspdiv

#endif
