#pragma once

#include <mixvem/geometry.hpp>
#include <mixvem/mesh.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace mixvem::test {

struct FamilyCase {
    Domain domain;
    MeshFamily family;
};

inline std::vector<FamilyCase> all_families()
{
    return {{Domain::UnitSquare, MeshFamily::T1_triangles},        {Domain::UnitSquare, MeshFamily::T2_squares},
            {Domain::UnitSquare, MeshFamily::T3_perturbed_squares}, {Domain::UnitSquare, MeshFamily::T4_trapezoids},
            {Domain::LShape, MeshFamily::T5_hexagons},              {Domain::LShape, MeshFamily::T6_lshape_triangles},
            {Domain::LShape, MeshFamily::T7_lshape_squares},        {Domain::SymSquare, MeshFamily::T2_squares},
            {Domain::SymSquare, MeshFamily::T1_triangles}};
}

inline bool needs_even(MeshFamily f)
{
    return f == MeshFamily::T4_trapezoids || f == MeshFamily::T6_lshape_triangles ||
           f == MeshFamily::T7_lshape_squares;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Random convex polygon: sorted random angles on an ellipse, random shift.
inline std::vector<Point2> random_convex_polygon(std::mt19937_64& rng)
{
    const int n = std::uniform_int_distribution<int>(3, 9)(rng);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i)
        angles.push_back(uniform(rng, 0.0, 2.0 * std::numbers::pi));
    std::sort(angles.begin(), angles.end());
    const double a = uniform(rng, 0.2, 3.0);
    const double b = uniform(rng, 0.2, 3.0);
    const Point2 c{uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0)};
    std::vector<Point2> poly;
    for (double t : angles)
        poly.push_back({c.x + a * std::cos(t), c.y + b * std::sin(t)});
    return poly;
}

/// Random star-shaped (generally non-convex) polygon around a random center.
inline std::vector<Point2> random_star_polygon(std::mt19937_64& rng)
{
    const int n = std::uniform_int_distribution<int>(5, 12)(rng);
    const Point2 c{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    std::vector<Point2> poly;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * (i + uniform(rng, 0.1, 0.9)) / n;
        const double r = uniform(rng, 0.3, 1.5);
        poly.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return poly;
}

/// Polygons drawn from every mesh family (random cells) plus random convex
/// and star-shaped polygons.
inline std::vector<std::vector<Point2>> polygon_sample(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<PolygonalMesh> meshes;
    for (const auto& fc : all_families())
        for (int n : {2, 4, 6})
            meshes.push_back(generate(fc.domain, fc.family, n, seed + static_cast<std::uint64_t>(n)));
    std::vector<std::vector<Point2>> out;
    while (out.size() < count) {
        const auto pick = out.size() % 3;
        if (pick == 0) {
            const auto& m = meshes[std::uniform_int_distribution<std::size_t>(0, meshes.size() - 1)(rng)];
            out.push_back(m.cell_polygon(std::uniform_int_distribution<std::size_t>(0, m.num_cells() - 1)(rng)));
        } else if (pick == 1) {
            out.push_back(random_convex_polygon(rng));
        } else {
            out.push_back(random_star_polygon(rng));
        }
    }
    return out;
}

/// Exact Gram matrix of the lowest-order Raviart-Thomas flux basis on the
/// rectangle [0,a] x [0,b]; edges ordered bottom, right, top, left.
inline Eigen::Matrix4d rt0_rectangle_gram(double a, double b)
{
    // phi_right = (x, 0) / (a b), phi_left = (x - a, 0) / (a b), similarly in y.
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    const double xx = a / (3.0 * b);
    const double xy = -a / (6.0 * b);
    const double yy = b / (3.0 * a);
    const double yx = -b / (6.0 * a);
    g(1, 1) = g(3, 3) = xx;
    g(1, 3) = g(3, 1) = xy;
    g(0, 0) = g(2, 2) = yy;
    g(0, 2) = g(2, 0) = yx;
    return g;
}

/// Gram matrix of the flux basis of the lowest-order virtual space on a
/// convex quadrilateral, approximated with P1 finite elements: each basis
/// field is grad(phi) with  lap(phi) = 1/|K|  and  d(phi)/dn = 1/|e_i|  on
/// edge i (zero on the others).
inline Eigen::Matrix4d p1_neumann_gram(const std::vector<Point2>& quad, int m)
{
    const auto nodes_per_side = m + 1;
    auto id = [&](int i, int j) { return j * nodes_per_side + i; };
    std::vector<Point2> x(static_cast<std::size_t>(nodes_per_side * nodes_per_side));
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) {
            const double s = static_cast<double>(i) / m;
            const double t = static_cast<double>(j) / m;
            const double w0 = (1 - s) * (1 - t), w1 = s * (1 - t), w2 = s * t, w3 = (1 - s) * t;
            x[static_cast<std::size_t>(id(i, j))] = {w0 * quad[0].x + w1 * quad[1].x + w2 * quad[2].x + w3 * quad[3].x,
                                                     w0 * quad[0].y + w1 * quad[1].y + w2 * quad[2].y + w3 * quad[3].y};
        }
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd lumped = Eigen::VectorXd::Zero(n);
    double area = 0.0;
    auto triangle = [&](int a, int b, int c) {
        const Point2 pa = x[static_cast<std::size_t>(a)], pb = x[static_cast<std::size_t>(b)],
                     pc = x[static_cast<std::size_t>(c)];
        const double ar = 0.5 * ((pb.x - pa.x) * (pc.y - pa.y) - (pc.x - pa.x) * (pb.y - pa.y));
        const int v[3] = {a, b, c};
        const Point2 p[3] = {pa, pb, pc};
        Eigen::Matrix<double, 3, 2> grad;
        for (int i = 0; i < 3; ++i) {
            const Point2 q = p[(i + 1) % 3], r = p[(i + 2) % 3];
            grad(i, 0) = (q.y - r.y) / (2.0 * ar);
            grad(i, 1) = (r.x - q.x) / (2.0 * ar);
        }
        const Eigen::Matrix3d local = ar * grad * grad.transpose();
        for (int i = 0; i < 3; ++i) {
            lumped(v[i]) += ar / 3.0;
            for (int j = 0; j < 3; ++j)
                k(v[i], v[j]) += local(i, j);
        }
        area += ar;
    };
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            triangle(id(i, j), id(i + 1, j), id(i + 1, j + 1));
            triangle(id(i, j), id(i + 1, j + 1), id(i, j + 1));
        }

    // Boundary node runs of the four edges, in the quad's counterclockwise order.
    auto edge_nodes = [&](int e) {
        std::vector<int> out;
        for (int s = 0; s <= m; ++s) {
            switch (e) {
            case 0: out.push_back(id(s, 0)); break;
            case 1: out.push_back(id(m, s)); break;
            case 2: out.push_back(id(m - s, m)); break;
            default: out.push_back(id(0, m - s)); break;
            }
        }
        return out;
    };

    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
    const Eigen::LDLT<Eigen::MatrixXd> solver(k + ones * (k.diagonal().mean() / static_cast<double>(n)));
    Eigen::MatrixXd phi(n, 4);
    for (int e = 0; e < 4; ++e) {
        Eigen::VectorXd rhs = -lumped / area;
        const auto run = edge_nodes(e);
        const Point2 a = x[static_cast<std::size_t>(run.front())], b = x[static_cast<std::size_t>(run.back())];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        for (std::size_t s = 0; s + 1 < run.size(); ++s) {
            const Point2 p = x[static_cast<std::size_t>(run[s])], q = x[static_cast<std::size_t>(run[s + 1])];
            const double seg = std::hypot(q.x - p.x, q.y - p.y);
            rhs(run[s]) += 0.5 * seg / len;
            rhs(run[s + 1]) += 0.5 * seg / len;
        }
        phi.col(e) = solver.solve(rhs);
    }
    return phi.transpose() * k * phi;
}

} // namespace mixvem::test
