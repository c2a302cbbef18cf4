#pragma once

#include "mixvem/geometry.hpp"
#include "mixvem/quadrature.hpp"

#include <Eigen/Dense>

namespace mixvem {

// Lowest-order (k = 0) mixed virtual element on a single polygon.
//
// The local space is parameterized by one degree of freedom per edge, the
// normal flux  flux_i = int_{e_i} tau . n ds  taken with the outward normal
// of the cell. Nothing else is needed for k = 0; no basis function of the
// virtual space is ever evaluated.

/// Per-edge outward fluxes of a local field.
struct LocalDofs {
    Eigen::VectorXd fluxes;
};

/// Maps local fluxes to the L2 projection of the field onto constant vectors.
struct ProjectorK {
    Eigen::Matrix<double, 2, Eigen::Dynamic> matrix;

    [[nodiscard]] Eigen::Vector2d apply(const Eigen::VectorXd& fluxes) const { return matrix * fluxes; }
};

/// Stability constant scaling the flux-based stabilization. Must be >= 0.
class StabWeight {
public:
    explicit StabWeight(double value);
    [[nodiscard]] double value() const { return value_; }

private:
    double value_;
};

struct LocalMatrices {
    Eigen::MatrixXd a;        // stabilized flux form, N_K x N_K
    Eigen::RowVectorXd b;     // divergence coupling in local outward orientation (all ones)
    double m = 0.0;           // mass of the constant scalar basis, |K|
    Eigen::RowVectorXd div;   // b / |K|
    ProjectorK projector;
};

/// Projector from integration by parts against q = x, q = y:
///   int_K tau . grad q = sum_e flux_e q(m_e) - div(tau) int_K q,  div(tau) = sum_e flux_e / |K|.
ProjectorK projector(const CellGeometry& geom);

/// Flux of the constant vector c through each edge: F c with F_e = |e| n_e^T.
Eigen::Matrix<double, Eigen::Dynamic, 2> constant_flux_matrix(const CellGeometry& geom);

/// A_K = |K| P^T P + w D^T D,  D = I - F P.
LocalMatrices local_forms(const CellGeometry& geom, StabWeight w);

inline constexpr int kDefaultEdgeQuadrature = 8;

/// Edge-moment interpolant of a vector field (Gauss-Legendre per edge).
LocalDofs interpolate(const CellGeometry& geom, const VectorField& field,
                      int edge_quadrature_order = kDefaultEdgeQuadrature);

/// Cell mean of a scalar field.
double project_scalar_p0(const CellGeometry& geom, const ScalarField& f,
                         int quadrature_order = kDefaultEdgeQuadrature);

} // namespace mixvem
