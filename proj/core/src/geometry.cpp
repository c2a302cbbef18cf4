#include "mixvem/geometry.hpp"

#include "mixvem/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixvem {

double signed_area(std::span<const Point2> polygon)
{
    const std::size_t n = polygon.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

bool is_convex(std::span<const Point2> polygon, double tol)
{
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[(i + n - 1) % n];
        const Point2& b = polygon[i];
        const Point2& c = polygon[(i + 1) % n];
        const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        const double scale = std::hypot(b.x - a.x, b.y - a.y) * std::hypot(c.x - b.x, c.y - b.y);
        if (cross < -tol * scale)
            return false;
    }
    return true;
}

CellGeometry polygon_geometry(std::span<const Point2> polygon)
{
    const std::size_t n = polygon.size();
    if (n < 3)
        throw GeometryError("polygon needs at least 3 vertices, got " + std::to_string(n));

    CellGeometry g;
    g.vertices.assign(polygon.begin(), polygon.end());

    // Shift to the first vertex to limit cancellation in the moment sums.
    const Point2 o = polygon[0];
    double twice_area = 0.0;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = polygon[i].x - o.x;
        const double ay = polygon[i].y - o.y;
        const double bx = polygon[(i + 1) % n].x - o.x;
        const double by = polygon[(i + 1) % n].y - o.y;
        const double cross = ax * by - bx * ay;
        twice_area += cross;
        mx += (ax + bx) * cross;
        my += (ay + by) * cross;
    }
    g.area = 0.5 * twice_area;
    if (!(g.area > kDegenerateArea))
        throw GeometryError("degenerate or clockwise cell (area " + std::to_string(g.area) + ")");

    const double cx = mx / (6.0 * g.area);
    const double cy = my / (6.0 * g.area);
    g.centroid = {o.x + cx, o.y + cy};
    g.moment_x = g.area * g.centroid.x;
    g.moment_y = g.area * g.centroid.y;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            g.diameter = std::max(g.diameter, std::hypot(polygon[i].x - polygon[j].x, polygon[i].y - polygon[j].y));

    g.edges.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len = std::hypot(dx, dy);
        if (!(len > 0.0))
            throw GeometryError("zero-length edge in cell");
        g.edges[i].length = len;
        g.edges[i].normal = {dy / len, -dx / len};
        g.edges[i].midpoint = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    }
    return g;
}

CellGeometry cell_geometry(const PolygonalMesh& mesh, std::size_t cell)
{
    if (cell >= mesh.num_cells())
        throw ConfigError("cell index " + std::to_string(cell) + " out of range");
    const auto poly = mesh.cell_polygon(cell);
    return polygon_geometry(poly);
}

} // namespace mixvem
