#include "mixvem/quadrature.hpp"

#include "mixvem/error.hpp"

#include <cmath>
#include <numbers>

namespace mixvem {

GaussRule gauss_legendre(int n)
{
    if (n < 1)
        throw ConfigError("Gauss-Legendre rule needs n >= 1");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

double integrate_segment(Point2 a, Point2 b, const ScalarField& f, int n)
{
    const GaussRule rule = gauss_legendre(n);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = 0.5 * (rule.nodes[q] + 1.0);
        sum += rule.weights[q] * f({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    return 0.5 * len * sum;
}

double integrate_polygon(std::span<const Point2> polygon, const ScalarField& f, int n)
{
    const GaussRule rule = gauss_legendre(n);
    const Point2 o = polygon[0];
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
        const Point2 p1 = polygon[i];
        const Point2 p2 = polygon[i + 1];
        const double det = (p1.x - o.x) * (p2.y - o.y) - (p2.x - o.x) * (p1.y - o.y);
        // Duffy map of [0,1]^2 onto the triangle (o, p1, p2).
        double tri = 0.0;
        for (std::size_t qa = 0; qa < rule.nodes.size(); ++qa) {
            const double s = 0.5 * (rule.nodes[qa] + 1.0);
            for (std::size_t qb = 0; qb < rule.nodes.size(); ++qb) {
                const double t = 0.5 * (rule.nodes[qb] + 1.0);
                const double l1 = s * (1.0 - t);
                const double l2 = s * t;
                const Point2 p{o.x + l1 * (p1.x - o.x) + l2 * (p2.x - o.x),
                               o.y + l1 * (p1.y - o.y) + l2 * (p2.y - o.y)};
                tri += 0.25 * rule.weights[qa] * rule.weights[qb] * s * f(p);
            }
        }
        total += det * tri;
    }
    return total;
}

} // namespace mixvem
