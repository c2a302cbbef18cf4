#include "support.hpp"

#include <mixvem/error.hpp>
#include <mixvem/geometry.hpp>
#include <mixvem/mesh.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace mixvem;

namespace {

int count_tag(const PolygonalMesh& m, BoundaryTag t)
{
    return static_cast<int>(std::count_if(m.edges().begin(), m.edges().end(), [&](const Edge& e) { return e.tag == t; }));
}

bool has_cell(const PolygonalMesh& m, std::vector<Point2> want)
{
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto poly = m.cell_polygon(c);
        if (poly.size() != want.size())
            continue;
        for (std::size_t shift = 0; shift < poly.size(); ++shift) {
            bool same = true;
            for (std::size_t i = 0; i < poly.size() && same; ++i) {
                const Point2 p = poly[(i + shift) % poly.size()];
                same = std::abs(p.x - want[i].x) < 1e-14 && std::abs(p.y - want[i].y) < 1e-14;
            }
            if (same)
                return true;
        }
    }
    return false;
}

} // namespace

TEST(Generate, UniformSquaresN2)
{
    const auto m = generate(Domain::UnitSquare, MeshFamily::T2_squares, 2);
    EXPECT_EQ(m.num_cells(), 4u);
    EXPECT_EQ(m.num_vertices(), 9u);
    EXPECT_EQ(m.num_edges(), 12u);
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        EXPECT_DOUBLE_EQ(cell_geometry(m, c).area, 0.25);
}

TEST(Generate, TrapezoidReferenceCell)
{
    const auto m = generate(Domain::UnitSquare, MeshFamily::T4_trapezoids, 2);
    EXPECT_EQ(m.num_cells(), 4u);
    EXPECT_TRUE(has_cell(m, {{0, 0}, {0.5, 0}, {0.5, 2.0 / 3.0}, {0, 1.0 / 3.0}}));
    // The other three are its mirror images.
    EXPECT_TRUE(has_cell(m, {{0.5, 0}, {1, 0}, {1, 1.0 / 3.0}, {0.5, 2.0 / 3.0}}));
}

TEST(Generate, TrapezoidsNeedEvenN) { EXPECT_THROW(generate(Domain::UnitSquare, MeshFamily::T4_trapezoids, 3), ConfigError); }

TEST(Generate, PerturbedSquaresSeed7)
{
    const auto m = generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, 4, 7);
    double area = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto poly = m.cell_polygon(c);
        area += signed_area(poly);
    }
    EXPECT_NEAR(area, 1.0, 1e-12);
    EXPECT_GT(quality(m).min_edge_to_diameter, 0.1);
}

TEST(Generate, PerturbationLaw)
{
    const int n = 8;
    const double h = 1.0 / n;
    const auto base = generate(Domain::UnitSquare, MeshFamily::T2_squares, n);
    const auto pert = generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, n, 11);
    ASSERT_EQ(base.num_vertices(), pert.num_vertices());
    int moved = 0;
    for (std::size_t v = 0; v < base.num_vertices(); ++v) {
        const Point2 p = base.vertices()[v];
        const Point2 q = pert.vertices()[v];
        const bool boundary = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
        const bool center = p.x == 0.5 && p.y == 0.5;
        if (boundary || center) {
            EXPECT_EQ(p, q);
            continue;
        }
        EXPECT_LE(std::abs(p.x - q.x), 0.2 * h + 1e-15);
        EXPECT_LE(std::abs(p.y - q.y), 0.2 * h + 1e-15);
        moved += p == q ? 0 : 1;
    }
    EXPECT_EQ(moved, (n - 1) * (n - 1) - 1);
}

TEST(Generate, LShapeGridCellCount)
{
    EXPECT_EQ(generate(Domain::LShape, MeshFamily::T7_lshape_squares, 20).num_cells(), 300u);
    EXPECT_EQ(generate(Domain::LShape, MeshFamily::T6_lshape_triangles, 20).num_cells(), 600u);
}

TEST(Generate, HexagonalCellsAreConvexAndMostlyHexagons)
{
    for (int n : {4, 10, 20}) {
        const auto m = generate(Domain::LShape, MeshFamily::T5_hexagons, n, 3);
        const auto q = quality(m);
        EXPECT_TRUE(q.all_convex) << "N=" << n;
        EXPECT_GT(q.min_edge_to_diameter, 0.0);
        std::size_t hexagons = 0;
        for (const Cell& c : m.cells())
            hexagons += c.vertices.size() == 6 ? 1 : 0;
        if (n >= 10)
            EXPECT_GT(static_cast<double>(hexagons) / m.num_cells(), 0.5) << "N=" << n;
    }
}

TEST(Generate, Admissibility)
{
    EXPECT_FALSE(family_admissible(Domain::UnitSquare, MeshFamily::T5_hexagons));
    EXPECT_FALSE(family_admissible(Domain::UnitSquare, MeshFamily::T7_lshape_squares));
    EXPECT_FALSE(family_admissible(Domain::LShape, MeshFamily::T2_squares));
    EXPECT_TRUE(family_admissible(Domain::SymSquare, MeshFamily::T1_triangles));
    EXPECT_THROW(generate(Domain::UnitSquare, MeshFamily::T5_hexagons, 8), ConfigError);
    EXPECT_THROW(generate(Domain::UnitSquare, MeshFamily::T2_squares, 0), ConfigError);
}

TEST(Generate, InvariantsAllFamilies)
{
    for (const auto& fc : test::all_families()) {
        for (int n : {1, 2, 3, 4, 7, 8, 16, 32, 64}) {
            if (test::needs_even(fc.family) && n % 2 != 0)
                continue;
            if (fc.family == MeshFamily::T5_hexagons && (n < 2 || n > 32))
                continue;
            SCOPED_TRACE(std::string(to_string(fc.family)) + " N=" + std::to_string(n));
            const auto m = generate(fc.domain, fc.family, n, 5);
            double area = 0.0;
            for (std::size_t c = 0; c < m.num_cells(); ++c) {
                const auto g = cell_geometry(m, c);
                ASSERT_GT(g.area, 0.0);
                area += g.area;
                double sx = 0.0, sy = 0.0;
                for (const auto& e : g.edges) {
                    sx += e.length * e.normal.x;
                    sy += e.length * e.normal.y;
                }
                EXPECT_NEAR(sx, 0.0, 1e-12);
                EXPECT_NEAR(sy, 0.0, 1e-12);
            }
            EXPECT_NEAR(area / domain_area(fc.domain), 1.0, 1e-12);

            // Incidence and orientation.
            std::vector<std::vector<int>> signs(m.num_edges());
            for (const Cell& c : m.cells())
                for (const EdgeRef& r : c.edges)
                    signs[r.edge].push_back(r.sign);
            for (std::size_t e = 0; e < m.num_edges(); ++e) {
                const Edge& edge = m.edges()[e];
                EXPECT_LT(edge.v0, edge.v1);
                if (edge.tag == BoundaryTag::Interior) {
                    ASSERT_EQ(signs[e].size(), 2u);
                    EXPECT_EQ(signs[e][0], -signs[e][1]);
                } else {
                    EXPECT_EQ(signs[e].size(), 1u);
                }
            }
            const auto euler = static_cast<long>(m.num_vertices()) - static_cast<long>(m.num_edges()) +
                               static_cast<long>(m.num_cells());
            EXPECT_EQ(euler, 1);
        }
    }
}

TEST(Generate, Deterministic)
{
    for (const auto& fc : test::all_families()) {
        EXPECT_EQ(generate(fc.domain, fc.family, 6, 9), generate(fc.domain, fc.family, 6, 9));
    }
    EXPECT_NE(generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, 6, 1),
              generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, 6, 2));
}

TEST(TagBoundary, MixedOnSymmetricSquare)
{
    const auto m = tag_boundary(generate(Domain::SymSquare, MeshFamily::T2_squares, 2), BcSpec::MixedTopBottomDirichlet);
    EXPECT_EQ(count_tag(m, BoundaryTag::Dirichlet), 4);
    EXPECT_EQ(count_tag(m, BoundaryTag::Neumann), 4);
    for (const Edge& e : m.edges()) {
        const Point2 a = m.vertices()[e.v0], b = m.vertices()[e.v1];
        if (e.tag == BoundaryTag::Neumann)
            EXPECT_TRUE(std::abs(a.x) == 1.0 && a.x == b.x);
        if (e.tag == BoundaryTag::Dirichlet)
            EXPECT_TRUE(std::abs(a.y) == 1.0 && a.y == b.y);
    }
}

TEST(TagBoundary, AllDirichlet)
{
    const auto m = tag_boundary(generate(Domain::UnitSquare, MeshFamily::T2_squares, 2), BcSpec::AllDirichlet);
    EXPECT_EQ(count_tag(m, BoundaryTag::Dirichlet), 8);
    EXPECT_EQ(count_tag(m, BoundaryTag::Neumann), 0);
    EXPECT_EQ(count_tag(m, BoundaryTag::Boundary), 0);
}

TEST(TagBoundary, TrianglesMixed)
{
    const auto m = tag_boundary(generate(Domain::SymSquare, MeshFamily::T1_triangles, 10), BcSpec::MixedTopBottomDirichlet);
    EXPECT_EQ(count_tag(m, BoundaryTag::Neumann), 20);
    EXPECT_EQ(count_tag(m, BoundaryTag::Dirichlet), 20);
}

TEST(TagBoundary, LShapeDirichletEverywhere)
{
    const auto m = tag_boundary(generate(Domain::LShape, MeshFamily::T5_hexagons, 8, 1), BcSpec::AllDirichlet);
    EXPECT_EQ(count_tag(m, BoundaryTag::Boundary), 0);
    EXPECT_GT(count_tag(m, BoundaryTag::Dirichlet), 0);
    EXPECT_THROW(tag_boundary(m, BcSpec::MixedTopBottomDirichlet), ConfigError);
}

TEST(TagBoundary, RejectsEdgeOffTheBoundary)
{
    // A unit-square mesh claimed to live on the symmetric square.
    const auto sq = generate(Domain::UnitSquare, MeshFamily::T2_squares, 2);
    std::vector<Point2> v(sq.vertices().begin(), sq.vertices().end());
    std::vector<std::vector<std::size_t>> loops;
    for (const Cell& c : sq.cells())
        loops.push_back(c.vertices);
    for (auto& p : v) {
        p.x = 2.0 * p.x - 1.0;
        p.y = 1.5 * p.y - 1.0; // top edge ends up at y = 0.5
    }
    EXPECT_THROW(
        {
            const auto m = PolygonalMesh::from_cells(v, loops, Domain::SymSquare);
            (void)tag_boundary(m, BcSpec::AllDirichlet);
        },
        Error);
}

TEST(Quality, SquaresAndTrapezoids)
{
    for (int n : {1, 4, 16}) {
        const auto q = quality(generate(Domain::UnitSquare, MeshFamily::T2_squares, n));
        EXPECT_NEAR(q.min_edge_to_diameter, 1.0 / std::sqrt(2.0), 1e-14);
        EXPECT_NEAR(q.min_inradius_to_diameter, 0.5 / std::sqrt(2.0), 1e-14);
        EXPECT_TRUE(q.all_convex);
    }
    const double r2 = quality(generate(Domain::UnitSquare, MeshFamily::T4_trapezoids, 2)).min_edge_to_diameter;
    for (int n : {4, 8, 32})
        EXPECT_NEAR(quality(generate(Domain::UnitSquare, MeshFamily::T4_trapezoids, n)).min_edge_to_diameter, r2, 1e-12);
}

TEST(Quality, PerturbedRatiosPositive)
{
    const auto q = quality(generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, 8, 7));
    EXPECT_GT(q.min_edge_to_diameter, 0.0);
    EXPECT_LE(q.min_edge_to_diameter, 1.0);
    EXPECT_GT(q.min_inradius_to_diameter, 0.0);
    EXPECT_LE(q.min_inradius_to_diameter, 1.0);
}

TEST(FromCells, RejectsBadInput)
{
    const std::vector<Point2> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    EXPECT_NO_THROW(PolygonalMesh::from_cells(v, {{0, 1, 2, 3}}, Domain::UnitSquare));
    // Clockwise loop.
    EXPECT_THROW(PolygonalMesh::from_cells(v, {{0, 3, 2, 1}}, Domain::UnitSquare), GeometryError);
    // Does not cover the domain.
    EXPECT_THROW(PolygonalMesh::from_cells(v, {{0, 1, 2}}, Domain::UnitSquare), GeometryError);
    // Index out of range.
    EXPECT_THROW(PolygonalMesh::from_cells(v, {{0, 1, 2, 7}}, Domain::UnitSquare), GeometryError);
    // Unused vertex.
    auto extra = v;
    extra.push_back({0.5, 0.5});
    EXPECT_THROW(PolygonalMesh::from_cells(extra, {{0, 1, 2, 3}}, Domain::UnitSquare), GeometryError);
    // Hanging vertex: the right cell's left edge is split, the left cell's is not.
    const std::vector<Point2> w = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0.5, 1}, {0, 1}, {0.5, 0.5}};
    EXPECT_THROW(PolygonalMesh::from_cells(w, {{0, 1, 4, 5}, {1, 2, 3, 4, 6}}, Domain::UnitSquare), GeometryError);
    EXPECT_NO_THROW(PolygonalMesh::from_cells(w, {{0, 1, 6, 4, 5}, {1, 2, 3, 4, 6}}, Domain::UnitSquare));
}

TEST(FromCells, EdgeSignsFollowCanonicalOrientation)
{
    const auto m = generate(Domain::UnitSquare, MeshFamily::T1_triangles, 3);
    for (const Cell& c : m.cells())
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
            const std::size_t a = c.vertices[i], b = c.vertices[(i + 1) % c.vertices.size()];
            const Edge& e = m.edges()[c.edges[i].edge];
            EXPECT_EQ(std::min(a, b), e.v0);
            EXPECT_EQ(std::max(a, b), e.v1);
            EXPECT_EQ(c.edges[i].sign, a < b ? 1 : -1);
        }
}

TEST(Names, RoundTrip)
{
    for (auto d : {Domain::UnitSquare, Domain::SymSquare, Domain::LShape})
        EXPECT_EQ(parse_domain(to_string(d)), d);
    for (const auto& fc : test::all_families())
        EXPECT_EQ(parse_family(to_string(fc.family)), fc.family);
    for (auto t : {BoundaryTag::Interior, BoundaryTag::Boundary, BoundaryTag::Dirichlet, BoundaryTag::Neumann})
        EXPECT_EQ(parse_tag(to_string(t)), t);
    for (auto b : {BcSpec::AllDirichlet, BcSpec::MixedTopBottomDirichlet})
        EXPECT_EQ(parse_bc(to_string(b)), b);
    EXPECT_EQ(parse_family("t4"), MeshFamily::T4_trapezoids);
    EXPECT_EQ(parse_domain("lshape"), Domain::LShape);
    EXPECT_THROW((void)parse_family("t8"), ConfigError);
    EXPECT_THROW((void)parse_domain("circle"), ConfigError);
    EXPECT_THROW((void)parse_bc("robin"), ConfigError);
}
