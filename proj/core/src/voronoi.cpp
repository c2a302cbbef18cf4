#include "voronoi.hpp"

#include "mixvem/error.hpp"
#include "mixvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

namespace mixvem::detail {

namespace {

using Poly = std::vector<Point2>;

constexpr double kCorner = 0.5;
constexpr double kMergeTol = 1e-9;

/// Sutherland-Hodgman against the half-plane a x + b y <= c.
Poly clip(const Poly& poly, double a, double b, double c)
{
    Poly out;
    const std::size_t n = poly.size();
    if (n == 0)
        return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        const double fp = a * p.x + b * p.y - c;
        const double fq = a * q.x + b * q.y - c;
        if (fp <= 0.0)
            out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double t = fp / (fp - fq);
            out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out.size() >= 3 ? out : Poly{};
}

double area_of(const Poly& p) { return p.size() < 3 ? 0.0 : signed_area(p); }

Point2 centroid_of(const Poly& p)
{
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& u = p[i];
        const Point2& v = p[(i + 1) % p.size()];
        const double cr = u.x * v.y - v.x * u.y;
        a += cr;
        cx += (u.x + v.x) * cr;
        cy += (u.y + v.y) * cr;
    }
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

bool inside_lshape(Point2 p)
{
    return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0 && !(p.x >= kCorner && p.y >= kCorner);
}

class SeedGrid {
public:
    SeedGrid(const std::vector<Point2>& seeds, double spacing)
        : seeds_(seeds), size_(std::max(1, static_cast<int>(std::ceil(1.0 / spacing)))), spacing_(1.0 / size_),
          buckets_(static_cast<std::size_t>(size_ * size_))
    {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            buckets_[bucket_of(seeds[i])].push_back(i);
    }

    /// Voronoi cell of seed i restricted to the unit square.
    Poly cell(std::size_t i) const
    {
        const Point2 s = seeds_[i];
        Poly poly{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        const int bi = coord(s.x);
        const int bj = coord(s.y);
        for (int ring = 0; ring <= size_; ++ring) {
            for (int j = bj - ring; j <= bj + ring; ++j)
                for (int k = bi - ring; k <= bi + ring; ++k) {
                    if (std::max(std::abs(j - bj), std::abs(k - bi)) != ring)
                        continue;
                    if (j < 0 || k < 0 || j >= size_ || k >= size_)
                        continue;
                    for (std::size_t other : buckets_[static_cast<std::size_t>(j * size_ + k)]) {
                        if (other == i)
                            continue;
                        const Point2 t = seeds_[other];
                        poly = clip(poly, t.x - s.x, t.y - s.y,
                                    0.5 * ((t.x * t.x + t.y * t.y) - (s.x * s.x + s.y * s.y)));
                    }
                }
            double reach = 0.0;
            for (const Point2& p : poly)
                reach = std::max(reach, std::hypot(p.x - s.x, p.y - s.y));
            if (2.0 * reach <= ring * spacing_)
                break;
        }
        return poly;
    }

private:
    int coord(double v) const { return std::clamp(static_cast<int>(v / spacing_), 0, size_ - 1); }
    std::size_t bucket_of(Point2 p) const { return static_cast<std::size_t>(coord(p.y) * size_ + coord(p.x)); }

    const std::vector<Point2>& seeds_;
    int size_;
    double spacing_;
    std::vector<std::vector<std::size_t>> buckets_;
};

/// Voronoi cell intersected with the L-shape, as one or two convex pieces.
std::vector<Poly> lshape_pieces(const Poly& cell)
{
    const double full = area_of(cell);
    Poly left = clip(cell, 1.0, 0.0, kCorner);
    Poly lower_right = clip(clip(cell, -1.0, 0.0, -kCorner), 0.0, 1.0, kCorner);
    const double kept = area_of(left) + area_of(lower_right);
    if (full - kept <= 1e-14 * std::max(full, 1e-300))
        return {cell};
    std::vector<Poly> out;
    if (area_of(left) > 0.0)
        out.push_back(std::move(left));
    if (area_of(lower_right) > 0.0)
        out.push_back(std::move(lower_right));
    return out;
}

std::vector<Point2> lattice_seeds(int n, std::uint64_t seed)
{
    const double d = 1.0 / n;
    const double dy = d * std::sqrt(3.0) / 2.0;
    std::mt19937_64 rng(seed);
    auto jitter = [&] { return (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.3 * d; };
    std::vector<Point2> seeds;
    // The re-entrant corner carries a pinned seed so that exactly one cell
    // wraps around it.
    seeds.push_back({kCorner, kCorner});
    for (int j = 0; (j + 0.5) * dy < 1.0; ++j)
        for (int i = 0; (i + 0.5) * d < 1.0; ++i) {
            Point2 p{(i + 0.5 + 0.5 * (j % 2)) * d, (j + 0.5) * dy};
            const double jx = jitter();
            const double jy = jitter();
            if (!inside_lshape(p) || std::hypot(p.x - kCorner, p.y - kCorner) < 0.5 * d)
                continue;
            Point2 q{p.x + jx, p.y + jy};
            seeds.push_back(inside_lshape(q) ? q : p);
        }
    return seeds;
}

class VertexPool {
public:
    explicit VertexPool(double cell) : cell_(cell) {}

    std::size_t insert(Point2 p)
    {
        const long long kx = key(p.x);
        const long long ky = key(p.y);
        for (long long a = kx - 1; a <= kx + 1; ++a)
            for (long long b = ky - 1; b <= ky + 1; ++b) {
                auto it = index_.find({a, b});
                if (it == index_.end())
                    continue;
                for (std::size_t v : it->second)
                    if (std::hypot(points_[v].x - p.x, points_[v].y - p.y) <= kMergeTol)
                        return v;
            }
        index_[{kx, ky}].push_back(points_.size());
        points_.push_back(p);
        return points_.size() - 1;
    }

    /// Indices of pooled points within `radius` of the segment a-b bounding box.
    std::vector<std::size_t> near_box(Point2 a, Point2 b) const
    {
        std::vector<std::size_t> out;
        const long long x0 = key(std::min(a.x, b.x)) - 1, x1 = key(std::max(a.x, b.x)) + 1;
        const long long y0 = key(std::min(a.y, b.y)) - 1, y1 = key(std::max(a.y, b.y)) + 1;
        for (long long i = x0; i <= x1; ++i)
            for (long long j = y0; j <= y1; ++j) {
                auto it = index_.find({i, j});
                if (it != index_.end())
                    out.insert(out.end(), it->second.begin(), it->second.end());
            }
        return out;
    }

    const std::vector<Point2>& points() const { return points_; }

private:
    long long key(double v) const { return static_cast<long long>(std::floor(v / cell_)); }

    double cell_;
    std::vector<Point2> points_;
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> index_;
};

/// Removes consecutive duplicates and inserts pooled vertices lying strictly
/// inside an edge, so that neighbouring loops share identical edges.
std::vector<std::size_t> conforming_loop(const std::vector<std::size_t>& raw, const VertexPool& pool)
{
    std::vector<std::size_t> loop;
    for (std::size_t v : raw)
        if (loop.empty() || loop.back() != v)
            loop.push_back(v);
    while (loop.size() > 1 && loop.front() == loop.back())
        loop.pop_back();

    const auto& pts = pool.points();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const std::size_t va = loop[i];
        const std::size_t vb = loop[(i + 1) % loop.size()];
        const Point2 a = pts[va];
        const Point2 b = pts[vb];
        out.push_back(va);
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        std::vector<std::pair<double, std::size_t>> inner;
        for (std::size_t v : pool.near_box(a, b)) {
            if (v == va || v == vb)
                continue;
            const Point2 p = pts[v];
            const double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
            if (t <= 0.0 || t >= 1.0)
                continue;
            const double dist = std::abs((p.x - a.x) * dy - (p.y - a.y) * dx) / std::sqrt(len2);
            if (dist <= kMergeTol)
                inner.emplace_back(t, v);
        }
        std::sort(inner.begin(), inner.end());
        for (const auto& [t, v] : inner)
            out.push_back(v);
    }
    return out;
}

} // namespace

PolygonSoup lshape_voronoi(int n, std::uint64_t seed, int lloyd_iterations)
{
    if (n < 2)
        throw ConfigError("t5 needs N >= 2");
    const double d = 1.0 / n;
    std::vector<Point2> seeds = lattice_seeds(n, seed);

    std::vector<std::vector<Poly>> regions(seeds.size());
    auto tessellate = [&] {
        SeedGrid grid(seeds, d);
        for (std::size_t i = 0; i < seeds.size(); ++i)
            regions[i] = lshape_pieces(grid.cell(i));
    };

    for (int it = 0; it < lloyd_iterations; ++it) {
        tessellate();
        for (std::size_t i = 1; i < seeds.size(); ++i) { // seed 0 is pinned
            double a = 0.0, cx = 0.0, cy = 0.0;
            for (const Poly& piece : regions[i]) {
                const double pa = area_of(piece);
                const Point2 c = centroid_of(piece);
                a += pa;
                cx += pa * c.x;
                cy += pa * c.y;
            }
            if (a > 0.0 && inside_lshape({cx / a, cy / a}))
                seeds[i] = {cx / a, cy / a};
        }
    }
    tessellate();

    VertexPool pool(d);
    std::vector<std::vector<std::size_t>> raw_loops;
    for (const auto& pieces : regions)
        for (const Poly& piece : pieces) {
            std::vector<std::size_t> loop;
            loop.reserve(piece.size());
            for (const Point2& p : piece)
                loop.push_back(pool.insert(p));
            raw_loops.push_back(std::move(loop));
        }

    PolygonSoup soup;
    for (const auto& raw : raw_loops) {
        auto loop = conforming_loop(raw, pool);
        if (loop.size() >= 3)
            soup.loops.push_back(std::move(loop));
    }
    soup.vertices = pool.points();
    return soup;
}

} // namespace mixvem::detail
