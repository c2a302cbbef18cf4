#include "mixvem/mesh.hpp"

#include "mixvem/error.hpp"
#include "mixvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace mixvem {

namespace {

constexpr double kOnLineTol = 1e-10;

struct Segment {
    Point2 a;
    Point2 b;
    bool horizontal;
};

std::vector<Segment> boundary_segments(Domain d)
{
    switch (d) {
    case Domain::UnitSquare:
        return {{{0, 0}, {1, 0}, true}, {{1, 0}, {1, 1}, false}, {{1, 1}, {0, 1}, true}, {{0, 1}, {0, 0}, false}};
    case Domain::SymSquare:
        return {{{-1, -1}, {1, -1}, true}, {{1, -1}, {1, 1}, false}, {{1, 1}, {-1, 1}, true}, {{-1, 1}, {-1, -1}, false}};
    case Domain::LShape:
        return {{{0, 0}, {1, 0}, true},       {{1, 0}, {1, 0.5}, false},   {{1, 0.5}, {0.5, 0.5}, true},
                {{0.5, 0.5}, {0.5, 1}, false}, {{0.5, 1}, {0, 1}, true},    {{0, 1}, {0, 0}, false}};
    }
    return {};
}

bool on_segment(const Segment& s, Point2 p)
{
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    const double t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
    if (t < -kOnLineTol || t > 1.0 + kOnLineTol)
        return false;
    const double cross = (p.x - s.a.x) * dy - (p.y - s.a.y) * dx;
    return std::abs(cross) / std::sqrt(len2) <= kOnLineTol;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

} // namespace

PolygonalMesh PolygonalMesh::from_cells(std::vector<Point2> vertices,
                                        std::vector<std::vector<std::size_t>> loops,
                                        Domain domain,
                                        std::optional<MeshFamily> family,
                                        int refinement)
{
    PolygonalMesh mesh;
    mesh.domain_ = domain;
    mesh.family_ = family;
    mesh.refinement_ = refinement;

    for (const Point2& p : vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw GeometryError("non-finite vertex coordinate");

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
    std::vector<int> incidence;
    std::vector<int> first_sign;
    std::vector<char> used(vertices.size(), 0);
    double total_area = 0.0;

    mesh.cells_.reserve(loops.size());
    for (std::size_t c = 0; c < loops.size(); ++c) {
        const auto& loop = loops[c];
        if (loop.size() < 3)
            throw GeometryError("cell " + std::to_string(c) + " has fewer than 3 vertices");
        std::vector<Point2> poly;
        poly.reserve(loop.size());
        for (std::size_t v : loop) {
            if (v >= vertices.size())
                throw GeometryError("cell " + std::to_string(c) + " references missing vertex");
            used[v] = 1;
            poly.push_back(vertices[v]);
        }
        const double area = signed_area(poly);
        if (!(area > kDegenerateArea))
            throw GeometryError("cell " + std::to_string(c) + " is degenerate or clockwise");
        total_area += area;

        Cell cell;
        cell.vertices = loop;
        cell.edges.reserve(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const std::size_t a = loop[i];
            const std::size_t b = loop[(i + 1) % loop.size()];
            if (a == b)
                throw GeometryError("cell " + std::to_string(c) + " repeats a vertex");
            const auto key = std::minmax(a, b);
            auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, mesh.edges_.size());
            const int sign = a < b ? 1 : -1;
            if (inserted) {
                mesh.edges_.push_back({key.first, key.second, BoundaryTag::Interior});
                incidence.push_back(0);
                first_sign.push_back(sign);
            } else if (incidence[it->second] >= 2 || first_sign[it->second] == sign) {
                throw GeometryError("non-conforming edge (" + std::to_string(key.first) + ", " +
                                    std::to_string(key.second) + ")");
            }
            ++incidence[it->second];
            cell.edges.push_back({it->second, sign});
        }
        mesh.cells_.push_back(std::move(cell));
    }

    for (std::size_t e = 0; e < mesh.edges_.size(); ++e)
        if (incidence[e] == 1)
            mesh.edges_[e].tag = BoundaryTag::Boundary;
    if (std::find(used.begin(), used.end(), 0) != used.end())
        throw GeometryError("mesh has unreferenced vertices");

    const double expected = domain_area(domain);
    if (std::abs(total_area - expected) > 1e-10 * expected)
        throw GeometryError("cell areas sum to " + std::to_string(total_area) + ", domain area is " +
                            std::to_string(expected));

    const auto euler = static_cast<long long>(vertices.size()) - static_cast<long long>(mesh.edges_.size()) +
                       static_cast<long long>(mesh.cells_.size());
    if (euler != 1)
        throw GeometryError("Euler characteristic " + std::to_string(euler) + " != 1");

    mesh.vertices_ = std::move(vertices);
    return mesh;
}

std::vector<Point2> PolygonalMesh::cell_polygon(std::size_t cell) const
{
    std::vector<Point2> poly;
    poly.reserve(cells_[cell].vertices.size());
    for (std::size_t v : cells_[cell].vertices)
        poly.push_back(vertices_[v]);
    return poly;
}

std::vector<std::vector<std::size_t>> PolygonalMesh::edge_cells() const
{
    std::vector<std::vector<std::size_t>> out(edges_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (const EdgeRef& r : cells_[c].edges)
            out[r.edge].push_back(c);
    return out;
}

double PolygonalMesh::mesh_size() const
{
    double h = 0.0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& loop = cells_[c].vertices;
        for (std::size_t i = 0; i < loop.size(); ++i)
            for (std::size_t j = i + 1; j < loop.size(); ++j) {
                const Point2& a = vertices_[loop[i]];
                const Point2& b = vertices_[loop[j]];
                h = std::max(h, std::hypot(a.x - b.x, a.y - b.y));
            }
    }
    return h;
}

PolygonalMesh PolygonalMesh::with_tags(std::span<const BoundaryTag> tags) const
{
    if (tags.size() != edges_.size())
        throw ConfigError("tag count does not match edge count");
    PolygonalMesh out = *this;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const bool boundary = edges_[e].tag != BoundaryTag::Interior;
        if (boundary == (tags[e] == BoundaryTag::Interior))
            throw GeometryError("edge " + std::to_string(e) + ": tag contradicts incidence");
        out.edges_[e].tag = tags[e];
    }
    return out;
}

PolygonalMesh tag_boundary(const PolygonalMesh& mesh, BcSpec bc)
{
    if (bc == BcSpec::MixedTopBottomDirichlet && mesh.domain() == Domain::LShape)
        throw ConfigError("mixed boundary conditions are defined on square domains only");

    const auto segments = boundary_segments(mesh.domain());
    const auto verts = mesh.vertices();
    std::vector<BoundaryTag> tags;
    tags.reserve(mesh.num_edges());
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& edge = mesh.edges()[e];
        if (edge.tag == BoundaryTag::Interior) {
            tags.push_back(BoundaryTag::Interior);
            continue;
        }
        const Segment* hit = nullptr;
        for (const Segment& s : segments)
            if (on_segment(s, verts[edge.v0]) && on_segment(s, verts[edge.v1])) {
                hit = &s;
                break;
            }
        if (hit == nullptr)
            throw GeometryError("boundary edge " + std::to_string(e) + " is not on the domain boundary");
        if (bc == BcSpec::AllDirichlet || hit->horizontal)
            tags.push_back(BoundaryTag::Dirichlet);
        else
            tags.push_back(BoundaryTag::Neumann);
    }
    return mesh.with_tags(tags);
}

QualityReport quality(const PolygonalMesh& mesh)
{
    QualityReport q;
    q.min_edge_to_diameter = std::numeric_limits<double>::infinity();
    q.min_inradius_to_diameter = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        double shortest = std::numeric_limits<double>::infinity();
        double inradius = std::numeric_limits<double>::infinity();
        const std::size_t n = g.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            shortest = std::min(shortest, g.edges[i].length);
            inradius = std::min(inradius, point_segment_distance(g.centroid, g.vertices[i], g.vertices[(i + 1) % n]));
        }
        const bool convex = is_convex(g.vertices);
        q.all_convex = q.all_convex && convex;
        q.min_edge_to_diameter = std::min(q.min_edge_to_diameter, shortest / g.diameter);
        q.min_inradius_to_diameter = std::min(q.min_inradius_to_diameter, inradius / g.diameter);
    }
    return q;
}

double domain_area(Domain domain)
{
    switch (domain) {
    case Domain::UnitSquare:
        return 1.0;
    case Domain::SymSquare:
        return 4.0;
    case Domain::LShape:
        return 0.75;
    }
    return 0.0;
}

bool family_admissible(Domain domain, MeshFamily family)
{
    switch (family) {
    case MeshFamily::T1_triangles:
    case MeshFamily::T2_squares:
    case MeshFamily::T3_perturbed_squares:
    case MeshFamily::T4_trapezoids:
        return domain != Domain::LShape;
    case MeshFamily::T5_hexagons:
    case MeshFamily::T6_lshape_triangles:
    case MeshFamily::T7_lshape_squares:
        return domain == Domain::LShape;
    }
    return false;
}

std::string_view to_string(Domain d)
{
    switch (d) {
    case Domain::UnitSquare:
        return "unit-square";
    case Domain::SymSquare:
        return "sym-square";
    case Domain::LShape:
        return "lshape";
    }
    return "?";
}

std::string_view to_string(MeshFamily f)
{
    switch (f) {
    case MeshFamily::T1_triangles:
        return "t1";
    case MeshFamily::T2_squares:
        return "t2";
    case MeshFamily::T3_perturbed_squares:
        return "t3";
    case MeshFamily::T4_trapezoids:
        return "t4";
    case MeshFamily::T5_hexagons:
        return "t5";
    case MeshFamily::T6_lshape_triangles:
        return "t6";
    case MeshFamily::T7_lshape_squares:
        return "t7";
    }
    return "?";
}

std::string_view to_string(BoundaryTag t)
{
    switch (t) {
    case BoundaryTag::Interior:
        return "interior";
    case BoundaryTag::Boundary:
        return "boundary";
    case BoundaryTag::Dirichlet:
        return "dirichlet";
    case BoundaryTag::Neumann:
        return "neumann";
    }
    return "?";
}

std::string_view to_string(BcSpec bc)
{
    return bc == BcSpec::AllDirichlet ? "dirichlet" : "mixed";
}

Domain parse_domain(std::string_view s)
{
    if (s == "unit-square")
        return Domain::UnitSquare;
    if (s == "sym-square")
        return Domain::SymSquare;
    if (s == "lshape")
        return Domain::LShape;
    throw ConfigError("unknown domain '" + std::string(s) + "' (unit-square|sym-square|lshape)");
}

MeshFamily parse_family(std::string_view s)
{
    static constexpr MeshFamily all[] = {MeshFamily::T1_triangles,      MeshFamily::T2_squares,
                                         MeshFamily::T3_perturbed_squares, MeshFamily::T4_trapezoids,
                                         MeshFamily::T5_hexagons,        MeshFamily::T6_lshape_triangles,
                                         MeshFamily::T7_lshape_squares};
    for (MeshFamily f : all)
        if (s == to_string(f))
            return f;
    throw ConfigError("unknown mesh family '" + std::string(s) + "' (t1..t7)");
}

BoundaryTag parse_tag(std::string_view s)
{
    for (BoundaryTag t : {BoundaryTag::Interior, BoundaryTag::Boundary, BoundaryTag::Dirichlet, BoundaryTag::Neumann})
        if (s == to_string(t))
            return t;
    throw ConfigError("unknown edge tag '" + std::string(s) + "'");
}

BcSpec parse_bc(std::string_view s)
{
    if (s == "dirichlet")
        return BcSpec::AllDirichlet;
    if (s == "mixed")
        return BcSpec::MixedTopBottomDirichlet;
    throw ConfigError("unknown boundary condition '" + std::string(s) + "' (dirichlet|mixed)");
}

} // namespace mixvem
