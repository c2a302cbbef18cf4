#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixvem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Domain { UnitSquare, SymSquare, LShape };

/// Mesh families of the numerical experiments. T1-T4 live on the squares,
/// T5-T7 on the L-shaped domain.
enum class MeshFamily {
    T1_triangles,
    T2_squares,
    T3_perturbed_squares,
    T4_trapezoids,
    T5_hexagons,
    T6_lshape_triangles,
    T7_lshape_squares,
};

/// `Boundary` marks a boundary edge that has not been classified yet;
/// assembly refuses such meshes.
enum class BoundaryTag { Interior, Boundary, Dirichlet, Neumann };

enum class BcSpec { AllDirichlet, MixedTopBottomDirichlet };

struct Edge {
    std::size_t v0 = 0; // v0 < v1
    std::size_t v1 = 0;
    BoundaryTag tag = BoundaryTag::Interior;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeRef {
    std::size_t edge = 0;
    int sign = 1; // +1 iff v0 -> v1 traverses the cell counterclockwise

    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Cell {
    std::vector<std::size_t> vertices; // counterclockwise loop
    std::vector<EdgeRef> edges;        // edges[i] joins vertices[i] and vertices[i+1]

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct QualityReport {
    double min_edge_to_diameter = 0.0;
    double min_inradius_to_diameter = 0.0;
    bool all_convex = true;
};

/// Immutable conforming polygonal mesh. Construction validates orientation,
/// positivity of areas and edge incidence.
class PolygonalMesh {
public:
    /// Builds edges from cell loops (first-appearance order) and validates.
    /// Every boundary edge starts with tag `Boundary`.
    static PolygonalMesh from_cells(std::vector<Point2> vertices,
                                    std::vector<std::vector<std::size_t>> loops,
                                    Domain domain,
                                    std::optional<MeshFamily> family = std::nullopt,
                                    int refinement = 0);

    [[nodiscard]] std::span<const Point2> vertices() const { return vertices_; }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
    [[nodiscard]] std::span<const Cell> cells() const { return cells_; }
    [[nodiscard]] Domain domain() const { return domain_; }
    [[nodiscard]] std::optional<MeshFamily> family() const { return family_; }
    [[nodiscard]] int refinement() const { return refinement_; }

    [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
    [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
    [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }

    /// Coordinates of the vertex loop of a cell.
    [[nodiscard]] std::vector<Point2> cell_polygon(std::size_t cell) const;

    /// Cells adjacent to each edge (one entry for boundary edges).
    [[nodiscard]] std::vector<std::vector<std::size_t>> edge_cells() const;

    /// h := max cell diameter.
    [[nodiscard]] double mesh_size() const;

    /// Copy of this mesh with new edge tags (size must equal num_edges()).
    [[nodiscard]] PolygonalMesh with_tags(std::span<const BoundaryTag> tags) const;

    friend bool operator==(const PolygonalMesh&, const PolygonalMesh&) = default;

private:
    PolygonalMesh() = default;

    std::vector<Point2> vertices_;
    std::vector<Edge> edges_;
    std::vector<Cell> cells_;
    Domain domain_ = Domain::UnitSquare;
    std::optional<MeshFamily> family_;
    int refinement_ = 0;
};

/// Generates a mesh of the given family. T3 and T5 use `seed`; the others
/// ignore it. Throws ConfigError on inadmissible (domain, family, N).
PolygonalMesh generate(Domain domain, MeshFamily family, int n, std::uint64_t seed = 0);

/// Classifies every boundary edge. Throws GeometryError if a boundary edge
/// does not lie on any straight piece of the domain boundary.
PolygonalMesh tag_boundary(const PolygonalMesh& mesh, BcSpec bc);

QualityReport quality(const PolygonalMesh& mesh);

[[nodiscard]] double domain_area(Domain domain);
[[nodiscard]] bool family_admissible(Domain domain, MeshFamily family);

[[nodiscard]] std::string_view to_string(Domain d);
[[nodiscard]] std::string_view to_string(MeshFamily f);
[[nodiscard]] std::string_view to_string(BoundaryTag t);
[[nodiscard]] std::string_view to_string(BcSpec bc);
[[nodiscard]] Domain parse_domain(std::string_view s);
[[nodiscard]] MeshFamily parse_family(std::string_view s);
[[nodiscard]] BoundaryTag parse_tag(std::string_view s);
[[nodiscard]] BcSpec parse_bc(std::string_view s);

} // namespace mixvem
