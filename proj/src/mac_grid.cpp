#include "cuspdiv/mac_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cuspdiv/errors.hpp"

namespace cuspdiv {
namespace {

void finalize_masks(MacGrid& g) {
    g.uface.assign(static_cast<size_t>(g.nx + 1) * g.ny, 0);
    g.vface.assign(static_cast<size_t>(g.nx) * (g.ny + 1), 0);
    g.n_cells = 0;
    for (uint8_t c : g.cell) g.n_cells += c;

    g.n_ufaces = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            if (g.cell[g.cell_index(i - 1, j)] && g.cell[g.cell_index(i, j)]) {
                g.uface[g.uface_index(i, j)] = 1;
                ++g.n_ufaces;
            }
    g.n_vfaces = 0;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.cell[g.cell_index(i, j - 1)] && g.cell[g.cell_index(i, j)]) {
                g.vface[g.vface_index(i, j)] = 1;
                ++g.n_vfaces;
            }
}

void check_connected(const MacGrid& g) {
    if (g.n_cells == 0) throw DisconnectedInteriorError("grid has no interior cells");
    std::vector<uint8_t> seen(g.cell.size(), 0);
    std::vector<int> stack;
    int start = -1;
    for (size_t k = 0; k < g.cell.size(); ++k)
        if (g.cell[k]) {
            start = static_cast<int>(k);
            break;
        }
    stack.push_back(start);
    seen[start] = 1;
    long long visited = 0;
    while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        ++visited;
        const int i = k % g.nx;
        const int j = k / g.nx;
        const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (auto& q : nb) {
            if (q[0] < 0 || q[0] >= g.nx || q[1] < 0 || q[1] >= g.ny) continue;
            const size_t idx = g.cell_index(q[0], q[1]);
            if (g.cell[idx] && !seen[idx]) {
                seen[idx] = 1;
                stack.push_back(static_cast<int>(idx));
            }
        }
    }
    if (visited != g.n_cells)
        throw DisconnectedInteriorError("interior-cell graph is disconnected (under-resolved grid)");
}

}  // namespace

std::vector<int> MacGrid::uface_ids() const {
    std::vector<int> ids(uface.size(), -1);
    int next = 0;
    for (size_t k = 0; k < uface.size(); ++k)
        if (uface[k]) ids[k] = next++;
    return ids;
}

std::vector<int> MacGrid::vface_ids() const {
    std::vector<int> ids(vface.size(), -1);
    int next = 0;
    for (size_t k = 0; k < vface.size(); ++k)
        if (vface[k]) ids[k] = next++;
    return ids;
}

std::vector<int> MacGrid::cell_ids() const {
    std::vector<int> ids(cell.size(), -1);
    int next = 0;
    for (size_t k = 0; k < cell.size(); ++k)
        if (cell[k]) ids[k] = next++;
    return ids;
}

MacGrid build_grid(const std::function<bool(double, double)>& inside, double x0, double y0,
                   double x1, double y1, double h) {
    if (!(h > 0.0) || !(x1 > x0) || !(y1 > y0))
        throw std::invalid_argument("build_grid: bad box or cell size");
    MacGrid g;
    g.x0 = x0;
    g.y0 = y0;
    g.h = h;
    g.nx = static_cast<int>(std::ceil((x1 - x0) / h - 1e-12));
    g.ny = static_cast<int>(std::ceil((y1 - y0) / h - 1e-12));
    if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("build_grid: empty grid");

    g.cell.assign(static_cast<size_t>(g.nx) * g.ny, 0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            g.cell[g.cell_index(i, j)] = inside(g.cx(i), g.cy(j)) ? 1 : 0;

    finalize_masks(g);
    check_connected(g);
    return g;
}

MacGrid build_grid(const DomainSpec& spec, double h) {
    if (spec.params().dim != 2)
        throw std::invalid_argument("build_grid: MAC grids are two-dimensional");
    const double eps = spec.cut();
    if (eps > 0.0) {
        if (spec.width(eps) < h)
            throw UnderResolvedError("cusp width at the cut is below the cell size");
    }
    const double ymax = spec.params().family == Family::LogCusp2D ? spec.cap_radius() : 1.0;
    return build_grid([&spec](double x, double y) { return spec.contains(x, y); }, eps, -ymax,
                      spec.cap_end(), ymax, h);
}

MacGrid build_grid_from_mask(int nx, int ny, double h, const std::vector<uint8_t>& cell_mask) {
    if (cell_mask.size() != static_cast<size_t>(nx) * ny)
        throw std::invalid_argument("build_grid_from_mask: mask size mismatch");
    MacGrid g;
    g.x0 = 0.0;
    g.y0 = 0.0;
    g.h = h;
    g.nx = nx;
    g.ny = ny;
    g.cell = cell_mask;
    finalize_masks(g);
    check_connected(g);
    return g;
}

}  // namespace cuspdiv
