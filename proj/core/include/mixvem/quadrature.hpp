#pragma once

#include "mixvem/geometry.hpp"

#include <functional>
#include <vector>

namespace mixvem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact for degree 2n - 1).
GaussRule gauss_legendre(int n);

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Point2(Point2)>;

/// Integral along the straight segment a -> b with an n-point rule.
double integrate_segment(Point2 a, Point2 b, const ScalarField& f, int n);

/// Integral over a simple polygon: signed triangle fan from the first vertex,
/// collapsed n x n Gauss rule per triangle. Correct for non-convex simple
/// polygons as long as f is defined on the fan triangles.
double integrate_polygon(std::span<const Point2> polygon, const ScalarField& f, int n);

} // namespace mixvem
