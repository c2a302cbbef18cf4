#include "mixvem/vem_local.hpp"

#include "mixvem/error.hpp"

#include <cmath>
#include <string>

namespace mixvem {

StabWeight::StabWeight(double value) : value_(value)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ConfigError("stability constant must be finite and >= 0, got " + std::to_string(value));
}

ProjectorK projector(const CellGeometry& geom)
{
    const auto n = static_cast<Eigen::Index>(geom.num_edges());
    ProjectorK p;
    p.matrix.resize(2, n);
    // int_K tau . grad q = sum_e flux_e q(m_e) - (sum_e flux_e / |K|) int_K q
    // with q = x and q = y; the edge midpoint rule is exact since q is linear
    // and tau . n is constant on each edge.
    const double inv_area = 1.0 / geom.area;
    const double mean_x = geom.moment_x * inv_area;
    const double mean_y = geom.moment_y * inv_area;
    for (Eigen::Index e = 0; e < n; ++e) {
        const Point2 m = geom.edges[static_cast<std::size_t>(e)].midpoint;
        p.matrix(0, e) = (m.x - mean_x) * inv_area;
        p.matrix(1, e) = (m.y - mean_y) * inv_area;
    }
    return p;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> constant_flux_matrix(const CellGeometry& geom)
{
    const auto n = static_cast<Eigen::Index>(geom.num_edges());
    Eigen::Matrix<double, Eigen::Dynamic, 2> f(n, 2);
    for (Eigen::Index e = 0; e < n; ++e) {
        const EdgeGeometry& eg = geom.edges[static_cast<std::size_t>(e)];
        f(e, 0) = eg.length * eg.normal.x;
        f(e, 1) = eg.length * eg.normal.y;
    }
    return f;
}

LocalMatrices local_forms(const CellGeometry& geom, StabWeight w)
{
    const auto n = static_cast<Eigen::Index>(geom.num_edges());
    LocalMatrices out;
    out.projector = projector(geom);
    const auto& p = out.projector.matrix;

    // Fluxes of the non-polynomial remainder (I - Pi) tau.
    const Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n) - constant_flux_matrix(geom) * p;

    out.a = geom.area * (p.transpose() * p) + w.value() * (d.transpose() * d);
    out.a = 0.5 * (out.a + out.a.transpose()).eval();
    out.b = Eigen::RowVectorXd::Ones(n);
    out.m = geom.area;
    out.div = out.b / geom.area;
    return out;
}

LocalDofs interpolate(const CellGeometry& geom, const VectorField& field, int edge_quadrature_order)
{
    const std::size_t n = geom.num_edges();
    LocalDofs dofs;
    dofs.fluxes.resize(static_cast<Eigen::Index>(n));
    for (std::size_t e = 0; e < n; ++e) {
        const Point2 a = geom.vertices[e];
        const Point2 b = geom.vertices[(e + 1) % n];
        const Point2 nrm = geom.edges[e].normal;
        dofs.fluxes(static_cast<Eigen::Index>(e)) = integrate_segment(
            a, b,
            [&](Point2 x) {
                const Point2 v = field(x);
                return v.x * nrm.x + v.y * nrm.y;
            },
            edge_quadrature_order);
    }
    return dofs;
}

double project_scalar_p0(const CellGeometry& geom, const ScalarField& f, int quadrature_order)
{
    return integrate_polygon(geom.vertices, f, quadrature_order) / geom.area;
}

} // namespace mixvem
