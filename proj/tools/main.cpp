#include "report.hpp"

#include <mixvem/analysis.hpp>
#include <mixvem/assembly.hpp>
#include <mixvem/eigensolver.hpp>
#include <mixvem/error.hpp>
#include <mixvem/io.hpp>
#include <mixvem/mesh.hpp>

#include <CLI11.hpp>
#include <Eigen/Core>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mixvem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct Options {
    std::string domain = "unit-square";
    std::string bc = "dirichlet";
    std::string family = "t2";
    int n = 8;
    std::vector<int> n_list;
    double w = 1.0;
    std::vector<double> w_list;
    int modes = 6;
    std::uint64_t seed = 0;
    std::string backend = "auto";
    unsigned threads = 0;
    std::string out = "out";
    std::string mesh_out;
    std::string vtk_out;
    std::string dump_matrices;
};

/// Options after string parsing; built before any computation starts.
struct Experiment {
    RunSpec spec;
    std::vector<int> n_list;
    std::vector<double> w_list;
};

Experiment validate(const Options& o, bool modes_given, std::string_view command)
{
    Experiment e;
    e.spec.domain = parse_domain(o.domain);
    e.spec.bc = parse_bc(o.bc);
    e.spec.family = parse_family(o.family);
    e.spec.n = o.n;
    e.spec.w = o.w;
    e.spec.seed = o.seed;
    // The spurious tables list the ten lowest eigenvalues.
    e.spec.modes = command == "spurious" && !modes_given ? 10 : o.modes;
    if (o.backend != "auto")
        e.spec.backend = parse_backend(o.backend);
    if (!family_admissible(e.spec.domain, e.spec.family))
        throw ConfigError("family " + o.family + " is not defined on domain " + o.domain);
    if (e.spec.n < 1)
        throw ConfigError("--n must be >= 1");
    if (e.spec.modes < 1)
        throw ConfigError("--modes must be >= 1");
    (void)StabWeight(e.spec.w);
    e.n_list = o.n_list;
    e.w_list = o.w_list.empty() ? std::vector<double>{o.w} : o.w_list;
    for (double w : e.w_list)
        (void)StabWeight(w);
    for (int n : e.n_list)
        if (n < 1)
            throw ConfigError("--n-list entries must be >= 1");
    if ((command == "convergence" || command == "sweep") && e.n_list.size() < 2)
        throw ConfigError(std::string(command) + " needs --n-list with at least two levels");
    return e;
}

json echo(const Options& o, std::string_view command)
{
    return {{"command", command},  {"domain", o.domain},   {"bc", o.bc},           {"family", o.family},
            {"n", o.n},            {"n_list", o.n_list},   {"w", o.w},             {"w_list", o.w_list},
            {"modes", o.modes},    {"seed", o.seed},       {"backend", o.backend}, {"threads", o.threads},
            {"out", o.out},        {"mesh_out", o.mesh_out}, {"vtk_out", o.vtk_out},
            {"dump_matrices", o.dump_matrices}};
}

/// Run record; written at exit whatever the outcome.
class Manifest {
public:
    explicit Manifest(fs::path dir) : dir_(std::move(dir)) {}

    template <class F>
    auto stage(const std::string& name, F&& f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        struct Record {
            Manifest& m;
            std::string name;
            std::chrono::steady_clock::time_point t0;
            ~Record() { m.stages_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
        } record{*this, name, t0};
        return f();
    }

    void add_file(const fs::path& p) { files_.push_back(p.generic_string()); }

    void write(const json& config, int exit_code, const std::string& error) const
    {
        json j;
        j["status"] = exit_code == kOk ? "ok" : "failed";
        j["exit_code"] = exit_code;
        if (!error.empty())
            j["error"] = error;
        j["config"] = config;
        j["versions"] = {{"mixvem", kVersion},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." + std::to_string(EIGEN_MINOR_VERSION)},
                         {"cli11", CLI11_VERSION},
                         {"compiler", __VERSION__}};
        j["stages_seconds"] = stages_;
        j["files"] = files_;
        io::write_atomically(dir_ / "manifest.json", cli::dump(j));
    }

private:
    fs::path dir_;
    json stages_ = json::object();
    std::vector<std::string> files_;
};

void emit(Manifest& manifest, const fs::path& path, const std::string& contents)
{
    io::write_atomically(path, contents);
    manifest.add_file(path);
}

PolygonalMesh build_mesh(const RunSpec& spec) { return generate(spec.domain, spec.family, spec.n, spec.seed); }

int cmd_mesh(const Experiment& e, const Options& o, Manifest& manifest)
{
    const PolygonalMesh mesh = manifest.stage("mesh", [&] { return tag_boundary(build_mesh(e.spec), e.spec.bc); });
    const QualityReport q = quality(mesh);
    const fs::path out = o.mesh_out.empty() ? fs::path(o.out) / "mesh.poly" : fs::path(o.mesh_out);
    manifest.stage("write", [&] {
        io::write_mesh(out, mesh);
        manifest.add_file(out);
        json j;
        j["cells"] = mesh.num_cells();
        j["vertices"] = mesh.num_vertices();
        j["edges"] = mesh.num_edges();
        j["h"] = mesh.mesh_size();
        j["quality"] = cli::to_json(q);
        emit(manifest, fs::path(o.out) / "quality.json", cli::dump(j));
    });
    std::cout << mesh.num_cells() << " cells, " << mesh.num_edges() << " edges, " << mesh.num_vertices()
              << " vertices written to " << out.string() << '\n'
              << "h = " << io::format_number(mesh.mesh_size())
              << "  min edge/diameter = " << io::format_number(q.min_edge_to_diameter)
              << "  min inradius/diameter = " << io::format_number(q.min_inradius_to_diameter)
              << "  convex = " << (q.all_convex ? "yes" : "no") << '\n';
    return kOk;
}

int cmd_solve(const Experiment& e, const Options& o, Manifest& manifest)
{
    const PolygonalMesh mesh = manifest.stage("mesh", [&] { return tag_boundary(build_mesh(e.spec), e.spec.bc); });
    const AssembledSystem sys = manifest.stage("assemble", [&] { return assemble(mesh, StabWeight(e.spec.w)); });
    SolveOptions opts;
    opts.modes = e.spec.modes;
    opts.backend = e.spec.backend.value_or(e.spec.w == 0.0 ? Backend::ShiftInvert : default_backend(sys.pencil.n_u()));
    const EigenResult r = manifest.stage("solve", [&] { return solve_eigen(sys.pencil, opts); });

    manifest.stage("write", [&] {
        const fs::path dir(o.out);
        emit(manifest, dir / "eigenvalues.csv", cli::eigenvalues_csv(e.spec.n, r));
        json j;
        j["n"] = e.spec.n;
        j["h"] = mesh.mesh_size();
        j["cells"] = mesh.num_cells();
        j["flux_unknowns"] = sys.pencil.n_sigma();
        j["backend"] = to_string(r.backend);
        j["lambdas"] = std::vector<double>(r.lambdas.begin(), r.lambdas.end());
        j["residuals"] = std::vector<double>(r.residuals.begin(), r.residuals.end());
        emit(manifest, dir / "solve.json", cli::dump(j));
        if (!o.mesh_out.empty()) {
            io::write_mesh(fs::path(o.mesh_out), mesh);
            manifest.add_file(o.mesh_out);
        }
        if (!o.vtk_out.empty())
            for (const auto& p : io::write_vtk_modes(o.vtk_out, mesh, sys.dofs, r))
                manifest.add_file(p);
        if (!o.dump_matrices.empty())
            for (const auto& p : io::dump_matrices(o.dump_matrices, sys.pencil))
                manifest.add_file(p);
    });

    for (Eigen::Index m = 0; m < r.lambdas.size(); ++m)
        std::cout << "lambda_" << m + 1 << " = " << io::format_number(r.lambdas(m)) << '\n';
    return kOk;
}

int cmd_convergence(const Experiment& e, const Options& o, Manifest& manifest)
{
    const ConvergenceStudy study = manifest.stage("study", [&] { return convergence_study(e.spec, e.n_list); });
    const std::string csv = cli::convergence_csv(study);
    manifest.stage("write", [&] {
        emit(manifest, fs::path(o.out) / "convergence.csv", csv);
        emit(manifest, fs::path(o.out) / "convergence.json", cli::dump(cli::to_json(study)));
    });
    std::cout << csv;
    return kOk;
}

int cmd_sweep(const Experiment& e, const Options& o, Manifest& manifest)
{
    const StabilizationSweep sweep =
        manifest.stage("sweep", [&] { return stabilization_sweep(e.spec, e.n_list, e.w_list, o.threads); });
    const std::string csv = cli::sweep_csv(sweep);
    manifest.stage("write", [&] {
        emit(manifest, fs::path(o.out) / "sweep.csv", csv);
        emit(manifest, fs::path(o.out) / "sweep.json", cli::dump(cli::to_json(sweep)));
    });
    std::cout << csv;
    return kOk;
}

int cmd_spurious(const Experiment& e, const Options& o, Manifest& manifest)
{
    const RunResult r = manifest.stage("solve", [&] { return run_single(e.spec); });
    const std::vector<double> computed(r.eigen.lambdas.begin(), r.eigen.lambdas.end());
    // Enough exact values that every computed one has candidates nearby.
    const ExactSpectrum exact = exact_spectrum(e.spec.domain, e.spec.bc, 4 * e.spec.modes + 10);
    const SpuriousReport rep = detect_spurious(computed, exact);
    manifest.stage("write", [&] {
        emit(manifest, fs::path(o.out) / "spurious.json", cli::dump(cli::to_json(rep, computed, exact)));
    });
    for (std::size_t i = 0; i < computed.size(); ++i)
        std::cout << "lambda_" << i + 1 << " = " << io::format_number(computed[i])
                  << (rep.match[i] < 0 ? "  spurious" : "") << '\n';
    std::cout << rep.flagged.size() << " flagged\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed virtual element eigensolver for the Laplace operator on polygonal meshes"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Key = value file; command-line flags override it");
    app.require_subcommand(1, 1);

    Options o;
    app.add_option("--domain", o.domain, "unit-square | sym-square | lshape")->capture_default_str();
    app.add_option("--bc", o.bc, "dirichlet | mixed")->capture_default_str();
    app.add_option("--family", o.family, "t1 ... t7")->capture_default_str();
    app.add_option("--n", o.n, "Cells per side")->capture_default_str();
    app.add_option("--n-list", o.n_list, "Refinement levels, comma separated")->delimiter(',');
    app.add_option("--w", o.w, "Stabilization weight")->capture_default_str();
    app.add_option("--w-list", o.w_list, "Stabilization weights, comma separated")->delimiter(',');
    auto* modes_opt = app.add_option("--modes", o.modes, "Number of eigenpairs")->capture_default_str();
    app.add_option("--seed", o.seed, "Seed for randomized meshes")->capture_default_str();
    app.add_option("--backend", o.backend, "dense | shift-invert | auto")->capture_default_str();
    app.add_option("--threads", o.threads, "Sweep workers (0: hardware concurrency)")->capture_default_str();
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--mesh-out", o.mesh_out, "Write the mesh (poly-mesh v1) here");
    app.add_option("--vtk-out", o.vtk_out, "Directory for legacy VTK mode files");
    app.add_option("--dump-matrices", o.dump_matrices, "Directory for A, B, M in COO format");

    std::string command;
    for (const char* name : {"mesh", "solve", "convergence", "sweep", "spurious"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->callback([&command, name] { command = name; });
    }
    app.get_subcommand("mesh")->description("Generate a mesh and report its quality");
    app.get_subcommand("solve")->description("Lowest eigenpairs on one mesh");
    app.get_subcommand("convergence")->description("Eigenvalues and fitted orders over --n-list");
    app.get_subcommand("sweep")->description("Lowest eigenvalue over --w-list x --n-list");
    app.get_subcommand("spurious")->description("Flag computed eigenvalues with no exact partner");

    Manifest manifest(o.out);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        try {
            Manifest(o.out).write(echo(o, command), kConfigError, e.what());
        } catch (const std::exception&) {
        }
        return kConfigError;
    }

    manifest = Manifest(o.out);
    int code = kOk;
    std::string error;
    try {
        const Experiment e = validate(o, modes_opt->count() > 0, command);
        if (command == "mesh")
            code = cmd_mesh(e, o, manifest);
        else if (command == "solve")
            code = cmd_solve(e, o, manifest);
        else if (command == "convergence")
            code = cmd_convergence(e, o, manifest);
        else if (command == "sweep")
            code = cmd_sweep(e, o, manifest);
        else
            code = cmd_spurious(e, o, manifest);
    } catch (const ConfigError& ex) {
        code = kConfigError;
        error = ex.what();
    } catch (const GeometryError& ex) {
        code = kConfigError;
        error = ex.what();
    } catch (const std::exception& ex) {
        code = kNumericalError;
        error = ex.what();
    }
    if (!error.empty())
        std::cerr << "error: " << error << '\n';

    try {
        manifest.write(echo(o, command), code, error);
    } catch (const std::exception& ex) {
        std::cerr << "error: could not write manifest: " << ex.what() << '\n';
        if (code == kOk)
            code = kConfigError;
    }
    return code;
}
