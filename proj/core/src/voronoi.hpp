#pragma once

#include "mixvem/mesh.hpp"

#include <cstdint>
#include <vector>

namespace mixvem::detail {

struct PolygonSoup {
    std::vector<Point2> vertices;
    std::vector<std::vector<std::size_t>> loops;
};

/// Lloyd-relaxed Voronoi tessellation of the L-shape (0,1)^2 \ [1/2,1)^2,
/// seeded from a jittered hexagonal lattice of spacing 1/n. Cells are convex:
/// a cell that would wrap around the re-entrant corner is split along x = 1/2.
/// Returned loops are conforming (hanging vertices inserted into neighbours).
PolygonSoup lshape_voronoi(int n, std::uint64_t seed, int lloyd_iterations = 40);

} // namespace mixvem::detail
