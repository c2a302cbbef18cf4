#pragma once

#include "mixvem/mesh.hpp"
#include "mixvem/vem_local.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

namespace mixvem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Global numbering of the flux unknowns. Neumann edges carry no unknown.
struct DofMap {
    static constexpr int kConstrained = -1;

    std::vector<int> edge_dof;                 // per mesh edge
    std::vector<std::vector<int>> cell_dofs;   // per cell, per local edge (kConstrained allowed)
    std::vector<std::vector<int>> cell_signs;  // cell-outward flux = sign * global dof value

    [[nodiscard]] int num_dofs() const;
};

/// Matrices of the discrete mixed eigenproblem
///   A sigma + B^T u = 0,   -B sigma = lambda M u.
struct GlobalPencil {
    SparseMatrix a;          // n_sigma x n_sigma, symmetric
    SparseMatrix b;          // n_u x n_sigma
    Eigen::VectorXd m_diag;  // cell areas

    [[nodiscard]] Eigen::Index n_sigma() const { return a.rows(); }
    [[nodiscard]] Eigen::Index n_u() const { return b.rows(); }
};

struct AssembledSystem {
    GlobalPencil pencil;
    DofMap dofs;
};

/// Sums sign-adjusted local matrices in cell order. Throws ConfigError if a
/// boundary edge is still untagged.
AssembledSystem assemble(const PolygonalMesh& mesh, StabWeight w);

/// Cholesky of A plus the Schur operator S = B A^{-1} B^T. Requires A SPD.
class SchurComplement {
public:
    explicit SchurComplement(const GlobalPencil& pencil);

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    /// sigma = -A^{-1} B^T u
    [[nodiscard]] Eigen::VectorXd flux_from(const Eigen::VectorXd& u) const;
    [[nodiscard]] Eigen::VectorXd solve_a(const Eigen::VectorXd& rhs) const;
    /// Dense S, built column block by column block.
    [[nodiscard]] Eigen::MatrixXd dense() const;

    [[nodiscard]] Eigen::Index size() const { return b_->rows(); }

private:
    const SparseMatrix* b_;
    SparseMatrix bt_;
    Eigen::SimplicialLDLT<SparseMatrix> a_factor_;
};

/// Sparse LU of the saddle matrix [[A, B^T], [B, 0]]; works when A is only
/// semidefinite (w = 0) provided the saddle matrix is invertible.
class SaddleSolver {
public:
    explicit SaddleSolver(const GlobalPencil& pencil);
    ~SaddleSolver();
    SaddleSolver(SaddleSolver&&) noexcept;
    SaddleSolver& operator=(SaddleSolver&&) noexcept;

    struct Solution {
        Eigen::VectorXd sigma;
        Eigen::VectorXd u;
    };

    /// Solves A sigma + B^T u = 0, -B sigma = g.  Then u = S^{-1} g.
    /// `refinement_steps` rounds of iterative refinement follow the LU solve.
    [[nodiscard]] Solution solve(const Eigen::VectorXd& g, int refinement_steps = 2) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SourceSolution {
    Eigen::VectorXd sigma;
    Eigen::VectorXd u;
};

/// Discrete source problem (the operator T_h): A sigma + B^T u = 0,
/// -B sigma = M f, by Schur complement elimination. Throws NumericalError
/// when A is not SPD or S is singular.
SourceSolution solve_source(const GlobalPencil& pencil, const Eigen::VectorXd& f);

/// Max-norm of A - A^T.
double symmetry_defect(const SparseMatrix& a);

} // namespace mixvem
