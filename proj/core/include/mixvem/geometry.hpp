#pragma once

#include "mixvem/mesh.hpp"

#include <span>
#include <vector>

namespace mixvem {

struct EdgeGeometry {
    double length = 0.0;
    Point2 normal;   // outward unit normal
    Point2 midpoint;
};

/// Closed-form geometric data of one polygonal cell.
struct CellGeometry {
    std::vector<Point2> vertices; // counterclockwise
    double area = 0.0;
    Point2 centroid;
    double moment_x = 0.0; // integral of x over the cell
    double moment_y = 0.0; // integral of y over the cell
    double diameter = 0.0;
    std::vector<EdgeGeometry> edges; // edges[i] joins vertices[i] and vertices[i+1]

    [[nodiscard]] std::size_t num_edges() const { return edges.size(); }
};

/// Area below this is treated as degenerate.
inline constexpr double kDegenerateArea = 1e-14;

/// Geometry of an arbitrary counterclockwise simple polygon.
/// Throws GeometryError if the signed area is <= kDegenerateArea.
CellGeometry polygon_geometry(std::span<const Point2> polygon);

CellGeometry cell_geometry(const PolygonalMesh& mesh, std::size_t cell);

/// Signed (shoelace) area; positive for counterclockwise loops.
double signed_area(std::span<const Point2> polygon);

/// True if every interior angle is <= pi (collinear vertices allowed).
bool is_convex(std::span<const Point2> polygon, double tol = 1e-12);

} // namespace mixvem
