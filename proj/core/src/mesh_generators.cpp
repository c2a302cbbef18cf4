#include "mixvem/error.hpp"
#include "mixvem/mesh.hpp"

#include "voronoi.hpp"

#include <random>
#include <string>

namespace mixvem {

namespace {

struct Frame {
    double x0;
    double length;
};

Frame frame_of(Domain d)
{
    return d == Domain::SymSquare ? Frame{-1.0, 2.0} : Frame{0.0, 1.0};
}

std::size_t grid_index(int i, int j, int n)
{
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(i);
}

std::vector<Point2> grid_vertices(int n, Frame f)
{
    std::vector<Point2> v;
    v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    const double h = f.length / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            v.push_back({i == n ? f.x0 + f.length : f.x0 + i * h, j == n ? f.x0 + f.length : f.x0 + j * h});
    return v;
}

/// Uniform double in [-1, 1] from the raw 64-bit engine output, independent
/// of the standard library's distribution implementation.
double symmetric_unit(std::mt19937_64& rng)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

using Loops = std::vector<std::vector<std::size_t>>;

Loops square_loops(int n, bool keep(int, int, int))
{
    Loops loops;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!keep(i, j, n))
                continue;
            loops.push_back({grid_index(i, j, n), grid_index(i + 1, j, n), grid_index(i + 1, j + 1, n),
                             grid_index(i, j + 1, n)});
        }
    return loops;
}

Loops triangle_loops(int n, bool keep(int, int, int))
{
    Loops loops;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!keep(i, j, n))
                continue;
            const std::size_t a = grid_index(i, j, n);
            const std::size_t b = grid_index(i + 1, j, n);
            const std::size_t c = grid_index(i + 1, j + 1, n);
            const std::size_t d = grid_index(i, j + 1, n);
            loops.push_back({a, b, c});
            loops.push_back({a, c, d});
        }
    return loops;
}

bool keep_all(int, int, int) { return true; }
bool keep_lshape(int i, int j, int n) { return !(2 * i >= n && 2 * j >= n); }

/// Drops unreferenced vertices, keeping the original relative order.
PolygonalMesh compact(std::vector<Point2> vertices, Loops loops, Domain d, MeshFamily f, int n)
{
    std::vector<std::size_t> remap(vertices.size(), static_cast<std::size_t>(-1));
    for (const auto& loop : loops)
        for (std::size_t v : loop)
            remap[v] = 0;
    std::vector<Point2> kept;
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (remap[v] == 0) {
            remap[v] = kept.size();
            kept.push_back(vertices[v]);
        }
    for (auto& loop : loops)
        for (auto& v : loop)
            v = remap[v];
    return PolygonalMesh::from_cells(std::move(kept), std::move(loops), d, f, n);
}

// Reference block [0,1]^2 holding four congruent trapezoids similar to
// (0,0), (1/2,0), (1/2,2/3), (0,1/3). The right column mirrors the left one
// so that the block is conforming and tiles the plane.
PolygonalMesh trapezoid_mesh(int n, Frame f, Domain d)
{
    if (n % 2 != 0)
        throw ConfigError("t4 needs an even N (cells per side come in mirrored pairs), got " + std::to_string(n));
    const int blocks = n / 2;
    const double s = f.length / blocks;
    // Block-local vertex lattice: columns x in {0, 1/2, 1}, the mid column
    // carries y in {0, 2/3, 1}, the outer ones y in {0, 1/3, 1}. Shared
    // vertices between blocks are identified through a global index.
    const int nx = 2 * blocks + 1;     // vertex columns
    const int ny = 3 * blocks + 1;     // vertical slots: 0, 1/3, 2/3 per block plus top
    auto vid = [&](int col, int slot) { return static_cast<std::size_t>(slot) * nx + static_cast<std::size_t>(col); };
    std::vector<Point2> verts(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), {0.0, 0.0});
    auto at = [&](int bi, int bj, int col, int third) {
        const int gcol = 2 * bi + col;
        const int slot = 3 * bj + third;
        const double x = gcol == nx - 1 ? f.x0 + f.length : f.x0 + (bi + 0.5 * col) * s;
        const double y = slot == ny - 1 ? f.x0 + f.length : f.x0 + (bj + third / 3.0) * s;
        verts[vid(gcol, slot)] = {x, y};
        return vid(gcol, slot);
    };
    Loops loops;
    for (int bj = 0; bj < blocks; ++bj)
        for (int bi = 0; bi < blocks; ++bi) {
            const auto l0 = at(bi, bj, 0, 0), l1 = at(bi, bj, 0, 1), l3 = at(bi, bj, 0, 3);
            const auto m0 = at(bi, bj, 1, 0), m2 = at(bi, bj, 1, 2), m3 = at(bi, bj, 1, 3);
            const auto r0 = at(bi, bj, 2, 0), r1 = at(bi, bj, 2, 1), r3 = at(bi, bj, 2, 3);
            loops.push_back({l0, m0, m2, l1});
            loops.push_back({l1, m2, m3, l3});
            loops.push_back({m0, r0, r1, m2});
            loops.push_back({m2, r1, r3, m3});
        }
    return compact(std::move(verts), std::move(loops), d, MeshFamily::T4_trapezoids, n);
}

PolygonalMesh perturbed_mesh(int n, Frame f, Domain d, std::uint64_t seed)
{
    auto verts = grid_vertices(n, f);
    const double h = f.length / n;
    std::mt19937_64 rng(seed);
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i) {
            const double dx = symmetric_unit(rng);
            const double dy = symmetric_unit(rng);
            if (2 * i == n && 2 * j == n)
                continue; // central node stays
            Point2& p = verts[grid_index(i, j, n)];
            p.x += 0.2 * h * dx;
            p.y += 0.2 * h * dy;
        }
    return PolygonalMesh::from_cells(std::move(verts), square_loops(n, keep_all), d,
                                     MeshFamily::T3_perturbed_squares, n);
}

} // namespace

PolygonalMesh generate(Domain domain, MeshFamily family, int n, std::uint64_t seed)
{
    if (n < 1)
        throw ConfigError("N must be >= 1, got " + std::to_string(n));
    if (!family_admissible(domain, family))
        throw ConfigError("mesh family " + std::string(to_string(family)) + " is not defined on domain " +
                          std::string(to_string(domain)));
    const Frame f = frame_of(domain);
    switch (family) {
    case MeshFamily::T1_triangles:
        return PolygonalMesh::from_cells(grid_vertices(n, f), triangle_loops(n, keep_all), domain, family, n);
    case MeshFamily::T2_squares:
        return PolygonalMesh::from_cells(grid_vertices(n, f), square_loops(n, keep_all), domain, family, n);
    case MeshFamily::T3_perturbed_squares:
        return perturbed_mesh(n, f, domain, seed);
    case MeshFamily::T4_trapezoids:
        return trapezoid_mesh(n, f, domain);
    case MeshFamily::T5_hexagons: {
        auto poly = detail::lshape_voronoi(n, seed);
        return PolygonalMesh::from_cells(std::move(poly.vertices), std::move(poly.loops), domain, family, n);
    }
    case MeshFamily::T6_lshape_triangles:
    case MeshFamily::T7_lshape_squares:
        if (n % 2 != 0)
            throw ConfigError("L-shape grids need an even N, got " + std::to_string(n));
        return compact(grid_vertices(n, f),
                       family == MeshFamily::T6_lshape_triangles ? triangle_loops(n, keep_lshape)
                                                                 : square_loops(n, keep_lshape),
                       domain, family, n);
    }
    throw ConfigError("unknown mesh family");
}

} // namespace mixvem
