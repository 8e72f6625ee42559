#include "cnsdg/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace cnsdg {

namespace {

// Snaps x to the integer lattice of spacing dx; throws if off-lattice.
int snap(double x, double dx, const char* what) {
    const double r = x / dx;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r)))
        throw SnapError(std::string(what) + ": coordinate " + std::to_string(x) +
                        " is not a multiple of dx = " + std::to_string(dx));
    return static_cast<int>(n);
}

} // namespace

Mesh build_mesh(const DomainSpec& spec, double dx) {
    if (!(dx > 0.0)) throw SnapError("build_mesh: dx must be positive");
    if (spec.rectangles.empty()) throw SnapError("build_mesh: no rectangles");
    const int dim = spec.dim;

    Mesh mesh;
    mesh.dim = dim;
    mesh.dx = dx;
    mesh.segments = spec.segments;
    mesh.periodic = spec.periodic;
    if (dim == 1) mesh.periodic[1] = false;

    // Lattice bounds of the union.
    int lo[2] = {0, 0}, hi[2] = {0, 0};
    bool first = true;
    struct IRect {
        int lo[2], hi[2];
    };
    std::vector<IRect> irects;
    for (const auto& r : spec.rectangles) {
        IRect ir{};
        ir.lo[0] = snap(r.lo.x, dx, "rectangle");
        ir.hi[0] = snap(r.hi.x, dx, "rectangle");
        ir.lo[1] = dim == 2 ? snap(r.lo.y, dx, "rectangle") : 0;
        ir.hi[1] = dim == 2 ? snap(r.hi.y, dx, "rectangle") : 1;
        for (int a = 0; a < 2; ++a)
            if (ir.hi[a] <= ir.lo[a]) throw SnapError("build_mesh: degenerate rectangle");
        if (first) {
            for (int a = 0; a < 2; ++a) {
                lo[a] = ir.lo[a];
                hi[a] = ir.hi[a];
            }
            first = false;
        } else {
            for (int a = 0; a < 2; ++a) {
                lo[a] = std::min(lo[a], ir.lo[a]);
                hi[a] = std::max(hi[a], ir.hi[a]);
            }
        }
        irects.push_back(ir);
    }
    mesh.nx = hi[0] - lo[0];
    mesh.ny = hi[1] - lo[1];
    mesh.origin = {lo[0] * dx, dim == 2 ? lo[1] * dx : 0.0};

    // Active-cell mask over the bounding lattice.
    mesh.cell_index.assign(static_cast<size_t>(mesh.nx) * mesh.ny, -1);
    for (int iy = 0; iy < mesh.ny; ++iy)
        for (int ix = 0; ix < mesh.nx; ++ix) {
            const int gx = ix + lo[0], gy = iy + lo[1];
            for (const auto& ir : irects)
                if (gx >= ir.lo[0] && gx < ir.hi[0] && gy >= ir.lo[1] && gy < ir.hi[1]) {
                    mesh.cell_index[iy * mesh.nx + ix] = 0;
                    break;
                }
        }
    for (int iy = 0; iy < mesh.ny; ++iy)
        for (int ix = 0; ix < mesh.nx; ++ix)
            if (mesh.cell_index[iy * mesh.nx + ix] >= 0) {
                mesh.cell_index[iy * mesh.nx + ix] = static_cast<int32_t>(mesh.cells.size());
                mesh.cells.push_back({ix, iy});
            }

    // Snap boundary segments once.
    struct ISeg {
        int axis;       // axis the segment is perpendicular to
        int coord;      // lattice coordinate of its line
        int lo, hi;     // transverse lattice extent (lo == hi in 1D)
        int index;
    };
    std::vector<ISeg> isegs;
    for (int s = 0; s < static_cast<int>(spec.segments.size()); ++s) {
        const auto& seg = spec.segments[s];
        ISeg is{};
        is.index = s;
        if (dim == 1) {
            is.axis = 0;
            is.coord = snap(seg.a.x, dx, "segment") - lo[0];
            is.lo = is.hi = 0;
        } else {
            const int ax0 = snap(seg.a.x, dx, "segment"), ax1 = snap(seg.b.x, dx, "segment");
            const int ay0 = snap(seg.a.y, dx, "segment"), ay1 = snap(seg.b.y, dx, "segment");
            if (ax0 == ax1) {
                is.axis = 0;
                is.coord = ax0 - lo[0];
                is.lo = std::min(ay0, ay1) - lo[1];
                is.hi = std::max(ay0, ay1) - lo[1];
            } else if (ay0 == ay1) {
                is.axis = 1;
                is.coord = ay0 - lo[1];
                is.lo = std::min(ax0, ax1) - lo[0];
                is.hi = std::max(ax0, ax1) - lo[0];
            } else {
                throw SnapError("build_mesh: boundary segment is not axis-aligned");
            }
        }
        isegs.push_back(is);
    }

    // Matches a boundary face to its unique covering segment.
    auto find_segment = [&](int axis, int coord, int t0) -> int {
        int found = -1;
        for (const auto& is : isegs) {
            if (is.axis != axis || is.coord != coord) continue;
            if (dim == 2 && !(t0 >= is.lo && t0 + 1 <= is.hi)) continue;
            if (found >= 0)
                throw CoverageError("build_mesh: boundary face covered by multiple segments");
            found = is.index;
        }
        if (found < 0)
            throw CoverageError("build_mesh: boundary face at axis " + std::to_string(axis) +
                                ", lattice line " + std::to_string(coord) +
                                " has no segment tag");
        return found;
    };

    const int ext[2] = {mesh.nx, mesh.ny};
    for (int axis = 0; axis < dim; ++axis) {
        for (int c = 0; c < mesh.n_cells(); ++c) {
            const int ix = mesh.cells[c][0], iy = mesh.cells[c][1];
            const int t = axis == 0 ? iy : ix; // transverse coordinate
            const int a = axis == 0 ? ix : iy;

            auto face_center = [&](int plane) {
                Vec2 ctr;
                if (axis == 0) {
                    ctr = {mesh.origin.x + plane * dx,
                           dim == 2 ? mesh.origin.y + (iy + 0.5) * dx : 0.0};
                } else {
                    ctr = {mesh.origin.x + (ix + 0.5) * dx, mesh.origin.y + plane * dx};
                }
                return ctr;
            };

            // "+" side of the cell: interior face, periodic wrap, or boundary.
            {
                const int nax = a + 1;
                int ncell = -1;
                bool wrap = false;
                if (nax < ext[axis]) {
                    ncell = axis == 0 ? mesh.cell_at(nax, iy) : mesh.cell_at(ix, nax);
                } else if (mesh.periodic[axis]) {
                    ncell = axis == 0 ? mesh.cell_at(0, iy) : mesh.cell_at(ix, 0);
                    if (ncell < 0)
                        throw CoverageError("build_mesh: periodic wrap into inactive cell");
                    wrap = true;
                }
                if (ncell >= 0) {
                    if (wrap || ncell > c) // interior faces emitted once, from the lower cell
                        mesh.faces.push_back(
                            {c, ncell, -1, static_cast<int8_t>(axis), 1, wrap, face_center(nax)});
                } else if (!mesh.periodic[axis] || nax < ext[axis]) {
                    const int seg = find_segment(axis, nax, t);
                    mesh.faces.push_back(
                        {c, -1, seg, static_cast<int8_t>(axis), 1, false, face_center(nax)});
                }
            }
            // "-" side: only boundary faces are emitted here.
            {
                const int nax = a - 1;
                int ncell = -1;
                if (nax >= 0) {
                    ncell = axis == 0 ? mesh.cell_at(nax, iy) : mesh.cell_at(ix, nax);
                } else if (mesh.periodic[axis]) {
                    continue; // wrap face emitted from the far cell
                }
                if (ncell < 0) {
                    const int seg = find_segment(axis, a, t);
                    mesh.faces.push_back(
                        {c, -1, seg, static_cast<int8_t>(axis), -1, false, face_center(a)});
                }
            }
        }
    }
    return mesh;
}

} // namespace cnsdg
