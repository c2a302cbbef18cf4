#include "mixvem/io.hpp"

#include "mixvem/error.hpp"
#include "mixvem/geometry.hpp"
#include "mixvem/vem_local.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mixvem::io {

namespace {

constexpr const char* kMeshHeader = "poly-mesh v1";

std::string format_exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Infers the domain from the vertex bounding box and the covered area.
Domain infer_domain(const std::vector<Point2>& verts, const std::vector<std::vector<std::size_t>>& loops)
{
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Point2& p : verts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double area = 0.0;
    for (const auto& loop : loops) {
        std::vector<Point2> poly;
        for (std::size_t v : loop)
            poly.push_back(verts.at(v));
        area += signed_area(poly);
    }
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-10; };
    if (near(xmin, -1) && near(xmax, 1) && near(ymin, -1) && near(ymax, 1))
        return Domain::SymSquare;
    if (near(xmin, 0) && near(xmax, 1) && near(ymin, 0) && near(ymax, 1))
        return near(area, 0.75) ? Domain::LShape : Domain::UnitSquare;
    throw GeometryError("mesh does not cover a supported domain");
}

void expect(std::istream& is, const char* what)
{
    if (!is)
        throw GeometryError(std::string("poly-mesh: malformed or truncated ") + what);
}

} // namespace

void write_mesh(std::ostream& os, const PolygonalMesh& mesh)
{
    os << kMeshHeader << '\n' << mesh.num_vertices() << '\n';
    for (const Point2& p : mesh.vertices())
        os << format_exact(p.x) << ' ' << format_exact(p.y) << '\n';
    os << mesh.num_edges() << '\n';
    for (const Edge& e : mesh.edges())
        os << e.v0 << ' ' << e.v1 << ' ' << to_string(e.tag) << '\n';
    os << mesh.num_cells() << '\n';
    for (const Cell& c : mesh.cells()) {
        for (std::size_t i = 0; i < c.vertices.size(); ++i)
            os << (i ? " " : "") << c.vertices[i];
        os << '\n';
    }
}

void write_mesh(const std::filesystem::path& path, const PolygonalMesh& mesh)
{
    std::ostringstream os;
    write_mesh(os, mesh);
    write_atomically(path, os.str());
}

PolygonalMesh read_mesh(std::istream& is)
{
    std::string line;
    std::getline(is, line);
    if (line != kMeshHeader)
        throw GeometryError("not a poly-mesh v1 file");

    std::size_t nv = 0;
    is >> nv;
    expect(is, "vertex count");
    std::vector<Point2> verts(nv);
    for (auto& p : verts) {
        is >> p.x >> p.y;
        expect(is, "vertex list");
    }
    std::size_t ne = 0;
    is >> ne;
    expect(is, "edge count");
    std::vector<Edge> edges(ne);
    for (auto& e : edges) {
        std::string tag;
        is >> e.v0 >> e.v1 >> tag;
        expect(is, "edge list");
        e.tag = parse_tag(tag);
    }
    std::size_t nc = 0;
    is >> nc;
    expect(is, "cell count");
    std::getline(is, line);
    std::vector<std::vector<std::size_t>> loops(nc);
    for (auto& loop : loops) {
        std::getline(is, line);
        expect(is, "cell list");
        std::istringstream ls(line);
        std::size_t v = 0;
        while (ls >> v)
            loop.push_back(v);
    }

    const Domain domain = infer_domain(verts, loops);
    PolygonalMesh mesh = PolygonalMesh::from_cells(std::move(verts), std::move(loops), domain);
    if (mesh.num_edges() != ne)
        throw GeometryError("poly-mesh: edge list does not match the cells");
    std::vector<BoundaryTag> tags(ne);
    for (std::size_t i = 0; i < ne; ++i) {
        const Edge& built = mesh.edges()[i];
        if (built.v0 != edges[i].v0 || built.v1 != edges[i].v1)
            throw GeometryError("poly-mesh: edge " + std::to_string(i) + " does not match the cells");
        tags[i] = edges[i].tag;
    }
    return mesh.with_tags(tags);
}

PolygonalMesh read_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open mesh file " + path.string());
    return read_mesh(in);
}

void write_coo(std::ostream& os, const SparseMatrix& m)
{
    os << "% " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << format_exact(it.value()) << '\n';
}

std::vector<std::filesystem::path> dump_matrices(const std::filesystem::path& dir, const GlobalPencil& pencil)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> out;
    auto dump = [&](const std::string& name, const SparseMatrix& m) {
        std::ostringstream os;
        write_coo(os, m);
        write_atomically(dir / name, os.str());
        out.push_back(dir / name);
    };
    dump("A.coo", pencil.a);
    dump("B.coo", pencil.b);
    SparseMatrix mm(pencil.n_u(), pencil.n_u());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < pencil.n_u(); ++i)
        trip.emplace_back(i, i, pencil.m_diag(i));
    mm.setFromTriplets(trip.begin(), trip.end());
    dump("M.coo", mm);
    return out;
}

void write_vtk_mode(std::ostream& os, const PolygonalMesh& mesh, const DofMap& dofs, const EigenResult& result,
                    int mode)
{
    const auto col = static_cast<Eigen::Index>(mode);
    os << "# vtk DataFile Version 3.0\n";
    os << "mixvem mode " << mode + 1 << " lambda " << format_exact(result.lambdas(col)) << '\n';
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Point2& p : mesh.vertices())
        os << format_exact(p.x) << ' ' << format_exact(p.y) << " 0\n";
    std::size_t size = 0;
    for (const Cell& c : mesh.cells())
        size += c.vertices.size() + 1;
    os << "CELLS " << mesh.num_cells() << ' ' << size << '\n';
    for (const Cell& c : mesh.cells()) {
        os << c.vertices.size();
        for (std::size_t v : c.vertices)
            os << ' ' << v;
        os << '\n';
    }
    os << "CELL_TYPES " << mesh.num_cells() << '\n';
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        os << "7\n"; // VTK_POLYGON
    os << "CELL_DATA " << mesh.num_cells() << '\n';
    os << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        os << format_exact(result.u_modes(static_cast<Eigen::Index>(c), col)) << '\n';
    os << "VECTORS sigma double\n";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        Eigen::VectorXd flux(static_cast<Eigen::Index>(g.num_edges()));
        for (std::size_t i = 0; i < g.num_edges(); ++i) {
            const int d = dofs.cell_dofs[c][i];
            flux(static_cast<Eigen::Index>(i)) =
                d == DofMap::kConstrained ? 0.0 : dofs.cell_signs[c][i] * result.sigma_modes(d, col);
        }
        const Eigen::Vector2d v = projector(g).apply(flux);
        os << format_exact(v.x()) << ' ' << format_exact(v.y()) << " 0\n";
    }
}

std::vector<std::filesystem::path> write_vtk_modes(const std::filesystem::path& dir, const PolygonalMesh& mesh,
                                                   const DofMap& dofs, const EigenResult& result)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> out;
    for (int m = 0; m < result.lambdas.size(); ++m) {
        std::ostringstream os;
        write_vtk_mode(os, mesh, dofs, result, m);
        char name[32];
        std::snprintf(name, sizeof name, "mode_%02d.vtk", m + 1);
        write_atomically(dir / name, os.str());
        out.push_back(dir / name);
    }
    return out;
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write " + tmp.string());
        out << contents;
        if (!out)
            throw ConfigError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace mixvem::io
