#ifndef CUSPDIV_MAC_GRID_HPP
#define CUSPDIV_MAC_GRID_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "cuspdiv/geometry.hpp"

namespace cuspdiv {

// Staggered (MAC) grid over a bounding box: scalars at cell centers, velocity
// components at faces.  A cell is interior iff its center lies inside the
// domain; a face is active iff both adjacent cells are interior.  All other
// faces carry the value 0 (discrete zero Dirichlet).  The interior-cell graph
// must be connected.
struct MacGrid {
    double x0 = 0.0, y0 = 0.0;
    double h = 0.0;
    int nx = 0, ny = 0;

    std::vector<uint8_t> cell;   // nx * ny, 1 = interior
    std::vector<uint8_t> uface;  // (nx+1) * ny, x-normal faces
    std::vector<uint8_t> vface;  // nx * (ny+1), y-normal faces

    long long n_cells = 0;   // interior cells
    long long n_ufaces = 0;  // active u faces
    long long n_vfaces = 0;  // active v faces

    long long unknowns() const { return n_ufaces + n_vfaces; }

    double cx(int i) const { return x0 + (i + 0.5) * h; }
    double cy(int j) const { return y0 + (j + 0.5) * h; }

    size_t cell_index(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    size_t uface_index(int i, int j) const { return static_cast<size_t>(j) * (nx + 1) + i; }
    size_t vface_index(int i, int j) const { return static_cast<size_t>(j) * nx + i; }

    // Compressed index maps (face/cell -> unknown number, -1 outside); built
    // on demand for the dense test oracle.
    std::vector<int> uface_ids() const;
    std::vector<int> vface_ids() const;
    std::vector<int> cell_ids() const;
};

// Builds the grid for an arbitrary membership predicate.  Throws
// DisconnectedInteriorError when the interior has zero cells or more than one
// component.
MacGrid build_grid(const std::function<bool(double, double)>& inside, double x0, double y0,
                   double x1, double y1, double h);

// Builds the grid for a truncated 2D cusp domain; requires the cusp to stay
// resolved at the cut (width(cut) >= h), else throws UnderResolvedError.
MacGrid build_grid(const DomainSpec& spec, double h);

// Rebuilds masks from a given interior-cell mask (test helper).
MacGrid build_grid_from_mask(int nx, int ny, double h, const std::vector<uint8_t>& cell_mask);

}  // namespace cuspdiv

#endif
