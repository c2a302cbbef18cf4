#include <mixvem/assembly.hpp>
#include <mixvem/eigensolver.hpp>
#include <mixvem/mesh.hpp>
#include <mixvem/vem_local.hpp>

#include <benchmark/benchmark.h>

using namespace mixvem;

namespace {

PolygonalMesh tagged(MeshFamily f, int n)
{
    const Domain d = f == MeshFamily::T5_hexagons || f == MeshFamily::T7_lshape_squares ? Domain::LShape
                                                                                          : Domain::UnitSquare;
    return tag_boundary(generate(d, f, n, 1), BcSpec::AllDirichlet);
}

void BM_Generate(benchmark::State& state, MeshFamily f)
{
    const auto n = static_cast<int>(state.range(0));
    const Domain d = f == MeshFamily::T5_hexagons ? Domain::LShape : Domain::UnitSquare;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate(d, f, n, 1));
}

void BM_LocalForms(benchmark::State& state)
{
    const auto mesh = tagged(MeshFamily::T5_hexagons, 16);
    std::vector<CellGeometry> cells;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        cells.push_back(cell_geometry(mesh, c));
    for (auto _ : state)
        for (const auto& g : cells)
            benchmark::DoNotOptimize(local_forms(g, StabWeight(1.0)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cells.size()));
}

void BM_Assemble(benchmark::State& state, MeshFamily f)
{
    const auto mesh = tagged(f, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble(mesh, StabWeight(1.0)));
    state.counters["cells"] = static_cast<double>(mesh.num_cells());
}

void BM_Solve(benchmark::State& state, Backend backend)
{
    const auto sys = assemble(tagged(MeshFamily::T2_squares, static_cast<int>(state.range(0))), StabWeight(1.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_eigen(sys.pencil, {.modes = 6, .backend = backend}));
    state.counters["n_u"] = static_cast<double>(sys.pencil.n_u());
}

void BM_SourceSolve(benchmark::State& state)
{
    const auto sys = assemble(tagged(MeshFamily::T2_squares, static_cast<int>(state.range(0))), StabWeight(1.0));
    const Eigen::VectorXd f = Eigen::VectorXd::Ones(sys.pencil.n_u());
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_source(sys.pencil, f));
}

} // namespace

BENCHMARK_CAPTURE(BM_Generate, squares, MeshFamily::T2_squares)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Generate, hexagons, MeshFamily::T5_hexagons)->Arg(16)->Arg(32);
BENCHMARK(BM_LocalForms);
BENCHMARK_CAPTURE(BM_Assemble, squares, MeshFamily::T2_squares)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Assemble, triangles, MeshFamily::T1_triangles)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Solve, dense, Backend::Dense)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, shift_invert, Backend::ShiftInvert)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SourceSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
