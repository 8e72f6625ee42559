/// @file mesh.hpp
/// @brief Uniform square-cell meshes over unions of axis-aligned rectangles,
/// with face connectivity, periodic wrap, and per-face boundary tags.

#ifndef CNSDG_MESH_HPP
#define CNSDG_MESH_HPP

#include "cnsdg/boundary.hpp"
#include "cnsdg/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace cnsdg {

struct Rect {
    Vec2 lo;
    Vec2 hi;
};

/// Axis-aligned boundary segment carrying the tags of both subproblems.
/// In 1D a segment degenerates to the point a == b.
struct BoundarySegment {
    Vec2 a;
    Vec2 b;
    HyperbolicBC hyperbolic;
    ParabolicBC parabolic;
};

struct DomainSpec {
    int dim = 2;
    std::vector<Rect> rectangles;
    std::vector<BoundarySegment> segments;
    std::array<bool, 2> periodic{false, false};
};

struct Face {
    int32_t cell_in;  ///< adjacent cell on the normal's origin side
    int32_t cell_out; ///< interior/wrap: the other cell; boundary: -1
    int32_t seg;      ///< boundary segment index, -1 for interior
    int8_t axis;      ///< 0 or 1
    int8_t sign;      ///< unit normal = sign * e_axis
    bool wrap;        ///< periodic wrap face
    Vec2 center;      ///< physical face midpoint
};

/// Immutable after construction; cells are ordered lexicographically by
/// lattice coordinate with x fastest, faces by axis then the same order.
struct Mesh {
    int dim = 2;
    double dx = 0.0;
    int nx = 0, ny = 0; ///< bounding lattice extents (ny == 1 in 1D)
    Vec2 origin;        ///< physical position of lattice corner (0, 0)
    std::vector<int32_t> cell_index;       ///< nx*ny lattice -> cell id or -1
    std::vector<std::array<int, 2>> cells; ///< lattice coordinates per cell
    std::vector<Face> faces;
    std::vector<BoundarySegment> segments;
    std::array<bool, 2> periodic{false, false};

    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }

    Vec2 cell_center(int c) const {
        return {origin.x + (cells[c][0] + 0.5) * dx,
                origin.y + (dim == 2 ? (cells[c][1] + 0.5) * dx : 0.0)};
    }
    /// Physical point of reference coordinate xhat in cell c.
    Vec2 map_to_physical(int c, const Vec2& xhat) const {
        const Vec2 ctr = cell_center(c);
        return {ctr.x + xhat.x * dx, ctr.y + (dim == 2 ? xhat.y * dx : 0.0)};
    }
    /// Mesh diameter used in penalty terms: cell diagonal.
    double diameter() const { return dim == 2 ? std::sqrt(2.0) * dx : dx; }

    int cell_at(int ix, int iy) const {
        if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) return -1;
        return cell_index[iy * nx + ix];
    }
};

/// Builds the mesh. Throws SnapError if the geometry does not align with the
/// dx lattice and CoverageError if a boundary face has no unique segment.
Mesh build_mesh(const DomainSpec& spec, double dx);

/// Unit normal of a face: from the lower-indexed cell into the higher one,
/// outward on boundary faces.
inline Vec2 face_normal(const Mesh& mesh, int f) {
    const Face& face = mesh.faces[f];
    Vec2 n{0.0, 0.0};
    n[face.axis] = static_cast<double>(face.sign);
    return n;
}

} // namespace cnsdg

#endif
