#include "support.hpp"

#include <mixvem/assembly.hpp>
#include <mixvem/eigensolver.hpp>
#include <mixvem/error.hpp>
#include <mixvem/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mixvem;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("mixvem_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void expect_same_mesh(const PolygonalMesh& a, const PolygonalMesh& b)
{
    ASSERT_EQ(a.num_vertices(), b.num_vertices());
    for (std::size_t i = 0; i < a.num_vertices(); ++i)
        EXPECT_EQ(a.vertices()[i], b.vertices()[i]);
    ASSERT_EQ(a.num_edges(), b.num_edges());
    for (std::size_t i = 0; i < a.num_edges(); ++i)
        EXPECT_EQ(a.edges()[i], b.edges()[i]);
    ASSERT_EQ(a.num_cells(), b.num_cells());
    for (std::size_t i = 0; i < a.num_cells(); ++i)
        EXPECT_EQ(a.cells()[i], b.cells()[i]);
    EXPECT_EQ(a.domain(), b.domain());
}

} // namespace

TEST(MeshIo, RoundTripAllFamilies)
{
    for (const auto& fc : test::all_families()) {
        SCOPED_TRACE(std::string(to_string(fc.family)));
        const auto bc = fc.domain == Domain::SymSquare ? BcSpec::MixedTopBottomDirichlet : BcSpec::AllDirichlet;
        const auto mesh = tag_boundary(generate(fc.domain, fc.family, 6, 17), bc);
        std::stringstream ss;
        io::write_mesh(ss, mesh);
        const auto back = io::read_mesh(ss);
        expect_same_mesh(mesh, back);
        std::stringstream again;
        io::write_mesh(again, back);
        EXPECT_EQ(again.str(), [&] {
            std::stringstream s;
            io::write_mesh(s, mesh);
            return s.str();
        }());
    }
}

TEST(MeshIo, UntaggedRoundTrip)
{
    const auto mesh = generate(Domain::UnitSquare, MeshFamily::T3_perturbed_squares, 5, 2);
    std::stringstream ss;
    io::write_mesh(ss, mesh);
    expect_same_mesh(mesh, io::read_mesh(ss));
}

TEST(MeshIo, FileRoundTrip)
{
    const auto dir = scratch("file");
    const auto mesh = generate(Domain::LShape, MeshFamily::T6_lshape_triangles, 4);
    io::write_mesh(dir / "m.poly", mesh);
    EXPECT_FALSE(fs::exists(dir / "m.poly.tmp"));
    expect_same_mesh(mesh, io::read_mesh(dir / "m.poly"));
    EXPECT_THROW((void)io::read_mesh(dir / "missing.poly"), ConfigError);
}

TEST(MeshIo, MalformedInputRejected)
{
    std::stringstream good;
    io::write_mesh(good, generate(Domain::UnitSquare, MeshFamily::T2_squares, 2));
    const std::string text = good.str();

    std::istringstream wrong_header("poly-mesh v9\n" + text.substr(text.find('\n') + 1));
    EXPECT_THROW((void)io::read_mesh(wrong_header), GeometryError);

    std::istringstream truncated(text.substr(0, text.size() / 2));
    EXPECT_THROW((void)io::read_mesh(truncated), Error);

    // Swap the endpoints of the first edge so it no longer matches the cells.
    std::string bad = text;
    const auto edges_at = bad.find("\n12\n") + 4;
    const auto eol = bad.find('\n', edges_at);
    bad.replace(edges_at, eol - edges_at, "0 8 interior");
    std::istringstream mismatched(bad);
    EXPECT_THROW((void)io::read_mesh(mismatched), GeometryError);

    std::istringstream garbage("poly-mesh v1\nabc\n");
    EXPECT_THROW((void)io::read_mesh(garbage), GeometryError);
}

TEST(Coo, HeaderAndEntries)
{
    SparseMatrix m(3, 2);
    m.insert(0, 0) = 1.5;
    m.insert(2, 1) = -0.1;
    m.makeCompressed();
    std::ostringstream os;
    io::write_coo(os, m);
    EXPECT_EQ(os.str(), "% 3 2 2\n0 0 1.5\n2 1 -0.10000000000000001\n");
}

TEST(Coo, DumpMatrices)
{
    const auto dir = scratch("coo");
    const auto sys = assemble(tag_boundary(generate(Domain::UnitSquare, MeshFamily::T2_squares, 2), BcSpec::AllDirichlet),
                              StabWeight(1.0));
    const auto files = io::dump_matrices(dir, sys.pencil);
    ASSERT_EQ(files.size(), 3u);
    EXPECT_EQ(files[0].filename(), "A.coo");
    EXPECT_EQ(files[2].filename(), "M.coo");
    const auto m = slurp(dir / "M.coo");
    EXPECT_EQ(m.substr(0, m.find('\n')), "% 4 4 4");
    const auto b = slurp(dir / "B.coo");
    EXPECT_EQ(b.substr(0, b.find('\n')), "% 4 12 16");
}

TEST(Vtk, ModeFiles)
{
    const auto dir = scratch("vtk");
    const auto mesh = tag_boundary(generate(Domain::UnitSquare, MeshFamily::T2_squares, 3), BcSpec::AllDirichlet);
    const auto sys = assemble(mesh, StabWeight(1.0));
    const auto r = solve_eigen(sys.pencil, {.modes = 2});
    const auto files = io::write_vtk_modes(dir, mesh, sys.dofs, r);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].filename(), "mode_01.vtk");
    EXPECT_EQ(files[1].filename(), "mode_02.vtk");
    const auto text = slurp(files[0]);
    EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
    EXPECT_NE(text.find("POINTS 16 double"), std::string::npos);
    EXPECT_NE(text.find("CELLS 9 45"), std::string::npos);
    EXPECT_NE(text.find("CELL_TYPES 9"), std::string::npos);
    EXPECT_NE(text.find("CELL_DATA 9"), std::string::npos);
    EXPECT_NE(text.find("SCALARS u double 1"), std::string::npos);
    EXPECT_NE(text.find("VECTORS sigma double"), std::string::npos);

    // First mode is symmetric about the center: the middle cell has zero flux projection.
    std::istringstream is(text.substr(text.find("VECTORS sigma double\n") + 21));
    double vx = 0, vy = 0, vz = 0;
    for (int c = 0; c <= 4; ++c)
        is >> vx >> vy >> vz;
    EXPECT_NEAR(vx, 0.0, 1e-10);
    EXPECT_NEAR(vy, 0.0, 1e-10);
}

TEST(Format, SixSignificantDigits)
{
    EXPECT_EQ(io::format_number(19.739208802178716), "19.7392");
    EXPECT_EQ(io::format_number(2.0), "2");
    EXPECT_EQ(io::format_number(0.000123456789), "0.000123457");
    EXPECT_EQ(io::format_number(1.0 / 4096.0), "0.000244141");
    EXPECT_EQ(io::format_number(4096.0), "4096");
}

TEST(AtomicWrite, ReplacesContentsAndLeavesNoTemp)
{
    const auto dir = scratch("atomic");
    io::write_atomically(dir / "sub" / "a.txt", "first");
    io::write_atomically(dir / "sub" / "a.txt", "second");
    EXPECT_EQ(slurp(dir / "sub" / "a.txt"), "second");
    EXPECT_FALSE(fs::exists(dir / "sub" / "a.txt.tmp"));
}
