#include "mixvem/assembly.hpp"

#include "mixvem/error.hpp"
#include "mixvem/geometry.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace mixvem {

int DofMap::num_dofs() const
{
    return static_cast<int>(std::count_if(edge_dof.begin(), edge_dof.end(), [](int d) { return d != kConstrained; }));
}

AssembledSystem assemble(const PolygonalMesh& mesh, StabWeight w)
{
    AssembledSystem sys;
    DofMap& dofs = sys.dofs;

    dofs.edge_dof.assign(mesh.num_edges(), DofMap::kConstrained);
    int next = 0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const BoundaryTag tag = mesh.edges()[e].tag;
        if (tag == BoundaryTag::Boundary)
            throw ConfigError("boundary edge " + std::to_string(e) + " has no boundary condition");
        if (tag != BoundaryTag::Neumann)
            dofs.edge_dof[e] = next++;
    }

    const auto n_sigma = static_cast<Eigen::Index>(next);
    const auto n_u = static_cast<Eigen::Index>(mesh.num_cells());
    std::vector<Eigen::Triplet<double>> a_trip;
    std::vector<Eigen::Triplet<double>> b_trip;
    sys.pencil.m_diag.resize(n_u);
    dofs.cell_dofs.resize(mesh.num_cells());
    dofs.cell_signs.resize(mesh.num_cells());

    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const Cell& cell = mesh.cells()[c];
        const LocalMatrices local = local_forms(cell_geometry(mesh, c), w);
        auto& cd = dofs.cell_dofs[c];
        auto& cs = dofs.cell_signs[c];
        cd.resize(cell.edges.size());
        cs.resize(cell.edges.size());
        for (std::size_t i = 0; i < cell.edges.size(); ++i) {
            cd[i] = dofs.edge_dof[cell.edges[i].edge];
            cs[i] = cell.edges[i].sign;
        }
        const auto row = static_cast<Eigen::Index>(c);
        sys.pencil.m_diag(row) = local.m;
        for (std::size_t i = 0; i < cd.size(); ++i) {
            if (cd[i] == DofMap::kConstrained)
                continue;
            b_trip.emplace_back(row, cd[i], cs[i] * local.b(static_cast<Eigen::Index>(i)));
            for (std::size_t j = 0; j < cd.size(); ++j) {
                if (cd[j] == DofMap::kConstrained)
                    continue;
                a_trip.emplace_back(cd[i], cd[j],
                                    cs[i] * cs[j] * local.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            }
        }
    }

    sys.pencil.a.resize(n_sigma, n_sigma);
    sys.pencil.a.setFromTriplets(a_trip.begin(), a_trip.end());
    sys.pencil.b.resize(n_u, n_sigma);
    sys.pencil.b.setFromTriplets(b_trip.begin(), b_trip.end());
    return sys;
}

double symmetry_defect(const SparseMatrix& a)
{
    const SparseMatrix diff = a - SparseMatrix(a.transpose());
    double m = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

// ---------------------------------------------------------------------------

SchurComplement::SchurComplement(const GlobalPencil& pencil) : b_(&pencil.b), bt_(pencil.b.transpose())
{
    a_factor_.compute(pencil.a);
    if (a_factor_.info() != Eigen::Success)
        throw NumericalError("factorization of A failed");
    const Eigen::VectorXd d = a_factor_.vectorD();
    if (d.size() > 0 && !(d.minCoeff() > 1e-14 * d.maxCoeff()))
        throw NumericalError("A is not positive definite (stability constant 0?)");
}

Eigen::VectorXd SchurComplement::solve_a(const Eigen::VectorXd& rhs) const { return a_factor_.solve(rhs); }

Eigen::VectorXd SchurComplement::flux_from(const Eigen::VectorXd& u) const
{
    return -a_factor_.solve(Eigen::VectorXd(bt_ * u));
}

Eigen::VectorXd SchurComplement::apply(const Eigen::VectorXd& u) const { return -(*b_ * flux_from(u)); }

Eigen::MatrixXd SchurComplement::dense() const
{
    const Eigen::Index n = b_->rows();
    Eigen::MatrixXd s(n, n);
    constexpr Eigen::Index kBlock = 128;
    for (Eigen::Index c0 = 0; c0 < n; c0 += kBlock) {
        const Eigen::Index w = std::min(kBlock, n - c0);
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(bt_.middleCols(c0, w));
        const Eigen::MatrixXd z = a_factor_.solve(rhs);
        s.middleCols(c0, w) = *b_ * z;
    }
    return 0.5 * (s + s.transpose());
}

// ---------------------------------------------------------------------------

struct SaddleSolver::Impl {
    Eigen::Index n_sigma = 0;
    Eigen::Index n_u = 0;
    SparseMatrix k;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SaddleSolver::SaddleSolver(const GlobalPencil& pencil) : impl_(std::make_unique<Impl>())
{
    impl_->n_sigma = pencil.n_sigma();
    impl_->n_u = pencil.n_u();
    const Eigen::Index n = impl_->n_sigma + impl_->n_u;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(pencil.a.nonZeros() + 2 * pencil.b.nonZeros()));
    for (int k = 0; k < pencil.a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(pencil.a, k); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < pencil.b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(pencil.b, k); it; ++it) {
            trip.emplace_back(impl_->n_sigma + it.row(), it.col(), it.value());
            trip.emplace_back(it.col(), impl_->n_sigma + it.row(), it.value());
        }
    SparseMatrix& k = impl_->k;
    k.resize(n, n);
    k.setFromTriplets(trip.begin(), trip.end());
    k.makeCompressed();
    impl_->lu.analyzePattern(k);
    impl_->lu.factorize(k);
    if (impl_->lu.info() != Eigen::Success)
        throw NumericalError("saddle-point factorization failed: " + impl_->lu.lastErrorMessage());
}

SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

SaddleSolver::Solution SaddleSolver::solve(const Eigen::VectorXd& g, int refinement_steps) const
{
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(impl_->n_sigma + impl_->n_u);
    rhs.tail(impl_->n_u) = -g;
    Eigen::VectorXd x = impl_->lu.solve(rhs);
    // Iterative refinement; large stabilization weights make K ill-conditioned.
    for (int step = 0; step < refinement_steps; ++step) {
        const Eigen::VectorXd r = rhs - impl_->k * x;
        x += impl_->lu.solve(r);
    }
    return {x.head(impl_->n_sigma), x.tail(impl_->n_u)};
}

// ---------------------------------------------------------------------------

namespace {

constexpr Eigen::Index kDenseSchurLimit = 3000;

Eigen::VectorXd conjugate_gradient(const SchurComplement& s, const Eigen::VectorXd& rhs)
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    const double stop = 1e-28 * rhs.squaredNorm();
    for (Eigen::Index it = 0; it < 20 * rhs.size() + 100 && rr > stop; ++it) {
        const Eigen::VectorXd sp = s.apply(p);
        const double curv = p.dot(sp);
        if (!(curv > 0.0))
            throw NumericalError("singular Schur complement (disconnected mesh or no Dirichlet boundary?)");
        const double alpha = rr / curv;
        x += alpha * p;
        r -= alpha * sp;
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    return x;
}

} // namespace

SourceSolution solve_source(const GlobalPencil& pencil, const Eigen::VectorXd& f)
{
    if (f.size() != pencil.n_u())
        throw ConfigError("source vector has wrong length");
    if (pencil.n_u() == 0)
        return {};

    const Eigen::VectorXd load = pencil.m_diag.cwiseProduct(f);
    // Constants are in the kernel of B^T when no boundary edge carries a
    // flux unknown; S is then singular.
    const Eigen::VectorXd bt_one = pencil.b.transpose() * Eigen::VectorXd::Ones(pencil.n_u());
    if (bt_one.lpNorm<Eigen::Infinity>() == 0.0)
        throw NumericalError("singular Schur complement: no boundary edge carries a flux unknown");

    const SchurComplement schur(pencil);
    SourceSolution sol;
    if (load.lpNorm<Eigen::Infinity>() == 0.0) {
        sol.u = Eigen::VectorXd::Zero(pencil.n_u());
    } else if (pencil.n_u() <= kDenseSchurLimit) {
        const Eigen::LLT<Eigen::MatrixXd> llt(schur.dense());
        if (llt.info() != Eigen::Success)
            throw NumericalError("singular Schur complement");
        sol.u = llt.solve(load);
    } else {
        sol.u = conjugate_gradient(schur, load);
    }
    sol.sigma = schur.flux_from(sol.u);

    const Eigen::VectorXd r1 = pencil.a * sol.sigma + pencil.b.transpose() * sol.u;
    const Eigen::VectorXd r2 = -(pencil.b * sol.sigma) - load;
    const double s1 = std::max((pencil.b.transpose() * sol.u).norm(), 1e-300);
    const double s2 = std::max(load.norm(), 1e-300);
    if (load.norm() > 0.0 && (r1.norm() > 1e-10 * s1 || r2.norm() > 1e-10 * s2))
        throw NumericalError("source solve residual above 1e-10");
    return sol;
}

} // namespace mixvem
