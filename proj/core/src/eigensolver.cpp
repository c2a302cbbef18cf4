#include "mixvem/eigensolver.hpp"

#include "mixvem/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace mixvem {

namespace {

constexpr int kBlockSize = 3;

/// Flips each column so that its first significant entry is positive.
void fix_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& sigma)
{
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        const double scale = u.col(j).lpNorm<Eigen::Infinity>();
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (std::abs(u(i, j)) > 1e-8 * scale) {
                if (u(i, j) < 0.0) {
                    u.col(j) *= -1.0;
                    sigma.col(j) *= -1.0;
                }
                break;
            }
        }
    }
}

/// Ascending by value; near-ties ordered lexicographically by eigenvector.
void order_pairs(EigenResult& r)
{
    const auto m = r.lambdas.size();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index i = 0; i < r.u_modes.rows(); ++i) {
            const double x = r.u_modes(i, a);
            const double y = r.u_modes(i, b);
            if (std::abs(x - y) > 1e-9)
                return x < y;
        }
        return false;
    };
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double la = r.lambdas(a);
        const double lb = r.lambdas(b);
        if (std::abs(la - lb) <= 1e-9 * std::max(std::abs(la), std::abs(lb)))
            return lex_less(a, b);
        return la < lb;
    });
    EigenResult sorted = r;
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index src = idx[static_cast<std::size_t>(j)];
        sorted.lambdas(j) = r.lambdas(src);
        sorted.u_modes.col(j) = r.u_modes.col(src);
        sorted.sigma_modes.col(j) = r.sigma_modes.col(src);
        sorted.residuals(j) = r.residuals(src);
    }
    r = std::move(sorted);
}

/// Solves (T - shift I) x = b for a symmetric tridiagonal T (diagonal d,
/// off-diagonal e) by Gaussian elimination with partial pivoting.
Eigen::VectorXd tridiagonal_solve(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double shift,
                                  Eigen::VectorXd b, double tiny)
{
    const Eigen::Index n = d.size();
    Eigen::VectorXd diag = d.array() - shift;
    Eigen::VectorXd up1 = e;                        // first superdiagonal
    Eigen::VectorXd up2 = Eigen::VectorXd::Zero(n); // fill-in from pivoting
    Eigen::VectorXd low = e;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (std::abs(low(i)) > std::abs(diag(i))) {
            std::swap(diag(i), low(i));
            std::swap(up1(i), diag(i + 1));
            if (i + 2 < n) {
                up2(i) = up1(i + 1);
                up1(i + 1) = 0.0;
            }
            std::swap(b(i), b(i + 1));
            // Row i+1 now holds the old row i; low(i) is its entry in column i.
        }
        if (diag(i) == 0.0)
            diag(i) = tiny;
        const double f = low(i) / diag(i);
        diag(i + 1) -= f * up1(i);
        if (i + 2 < n)
            up1(i + 1) -= f * up2(i);
        b(i + 1) -= f * b(i);
    }
    if (diag(n - 1) == 0.0)
        diag(n - 1) = tiny;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double v = b(i);
        if (i + 1 < n)
            v -= up1(i) * b(i + 1);
        if (i + 2 < n)
            v -= up2(i) * b(i + 2);
        b(i) = v / diag(i);
    }
    return b;
}

/// Eigenvectors of a symmetric tridiagonal matrix for the given eigenvalues,
/// by inverse iteration with orthogonalization against earlier vectors.
Eigen::MatrixXd tridiagonal_vectors(const Eigen::VectorXd& d, const Eigen::VectorXd& e, const Eigen::VectorXd& lambdas)
{
    const Eigen::Index n = d.size();
    const Eigen::Index m = lambdas.size();
    double norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        norm = std::max(norm, std::abs(d(i)) + (i > 0 ? std::abs(e(i - 1)) : 0.0) + (i + 1 < n ? std::abs(e(i)) : 0.0));
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = eps * std::max(norm, 1e-300);

    auto apply = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = d.cwiseProduct(x);
        y.head(n - 1) += e.cwiseProduct(x.tail(n - 1));
        y.tail(n - 1) += e.cwiseProduct(x.head(n - 1));
        return y;
    };

    std::mt19937_64 rng(0x7d1aULL);
    Eigen::MatrixXd z(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        // Nudge the shift so the shifted matrix is numerically nonsingular.
        const double shift = lambdas(j) + 10.0 * tiny;
        for (int it = 0; it < 8; ++it) {
            x -= z.leftCols(j) * (z.leftCols(j).transpose() * x);
            x.normalize();
            const Eigen::VectorXd y = tridiagonal_solve(d, e, shift, x, tiny);
            const double grow = y.norm();
            x = y / grow;
            x -= z.leftCols(j) * (z.leftCols(j).transpose() * x);
            x.normalize();
            if ((apply(x) - lambdas(j) * x).norm() <= 4.0 * static_cast<double>(n) * eps * norm)
                break;
        }
        z.col(j) = x;
    }
    return z;
}

/// Number of eigenvalues of the tridiagonal matrix below x (Sturm count).
Eigen::Index eigenvalues_below(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double x, double tiny)
{
    Eigen::Index count = 0;
    double q = 1.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        q = d(i) - x - (i > 0 ? e(i - 1) * e(i - 1) / q : 0.0);
        if (q == 0.0)
            q = -tiny;
        if (q < 0.0)
            ++count;
    }
    return count;
}

/// Smallest eigenpairs of the symmetric matrix c: Householder reduction to
/// tridiagonal form, bisection for the eigenvalues, inverse iteration for
/// the vectors.
void smallest_eigenpairs(const Eigen::MatrixXd& c, int modes, Eigen::VectorXd& values, Eigen::MatrixXd& vectors)
{
    const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(c);
    const Eigen::VectorXd d = tri.diagonal();
    const Eigen::VectorXd e = tri.subDiagonal();
    const Eigen::Index n = d.size();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(e(i - 1)) : 0.0) + (i + 1 < n ? std::abs(e(i)) : 0.0);
        lo = std::min(lo, d(i) - r);
        hi = std::max(hi, d(i) + r);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double tiny = eps * std::max(scale, 1e-300);

    values.resize(modes);
    for (int k = 0; k < modes; ++k) {
        double a = k > 0 ? values(k - 1) - tiny : lo - tiny;
        double b = hi + tiny;
        while (b - a > 2.0 * eps * std::max(std::abs(a), std::abs(b)) + tiny) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b)
                break;
            if (eigenvalues_below(d, e, mid, tiny) > k)
                b = mid;
            else
                a = mid;
        }
        values(k) = 0.5 * (a + b);
    }
    if (n == 1) {
        vectors = Eigen::MatrixXd::Ones(1, 1);
        return;
    }
    vectors = tri.matrixQ() * tridiagonal_vectors(d, e, values);
}

EigenResult solve_dense(const GlobalPencil& pencil, int modes)
{
    const SchurComplement schur(pencil);
    const Eigen::VectorXd dinv = pencil.m_diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd c = dinv.asDiagonal() * schur.dense() * dinv.asDiagonal();

    Eigen::VectorXd w;
    Eigen::MatrixXd z;
    smallest_eigenpairs(c, modes, w, z);

    // The dense back-transformation loses accuracy of order n eps |C|; one
    // sparse inverse-iteration step plus Rayleigh-Ritz restores it.
    const Eigen::MatrixXd u0 = dinv.asDiagonal() * z;
    const SaddleSolver saddle(pencil);
    Eigen::MatrixXd y(pencil.n_u(), modes);
    Eigen::MatrixXd sy(pencil.n_u(), modes);
    for (int j = 0; j < modes; ++j) {
        y.col(j) = saddle.solve(pencil.m_diag.cwiseProduct(u0.col(j))).u;
        sy.col(j) = schur.apply(y.col(j));
    }
    Eigen::MatrixXd k = y.transpose() * sy;
    k = 0.5 * (k + k.transpose()).eval();
    Eigen::MatrixXd g = y.transpose() * pencil.m_diag.asDiagonal() * y;
    g = 0.5 * (g + g.transpose()).eval();
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(k, g);
    if (ritz.info() != Eigen::Success)
        throw NumericalError("Rayleigh-Ritz refinement failed");

    EigenResult r;
    r.backend = Backend::Dense;
    r.lambdas = ritz.eigenvalues();
    r.u_modes = y * ritz.eigenvectors();
    r.sigma_modes.resize(pencil.n_sigma(), modes);
    for (int j = 0; j < modes; ++j)
        r.sigma_modes.col(j) = schur.flux_from(r.u_modes.col(j));
    return r;
}

/// Largest eigenvalues of T = M^{1/2} S^{-1} M^{1/2} by a block Krylov
/// subspace with full reorthogonalization and thick restarts.
EigenResult solve_shift_invert(const GlobalPencil& pencil, int modes, double tol)
{
    const SaddleSolver saddle(pencil);
    const Eigen::Index n = pencil.n_u();
    const Eigen::VectorXd dsq = pencil.m_diag.cwiseSqrt();

    auto apply_t = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        return dsq.cwiseProduct(saddle.solve(dsq.cwiseProduct(y), 1).u);
    };

    const Eigen::Index max_dim = std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * modes + 30, 60));
    Eigen::MatrixXd q(n, max_dim);
    Eigen::MatrixXd tq(n, max_dim);
    Eigen::Index k = 0;
    int applications = 0;

    auto add = [&](Eigen::VectorXd v) -> bool {
        if (k >= max_dim)
            return false;
        const double before = v.norm();
        if (before == 0.0)
            return false;
        for (int pass = 0; pass < 2; ++pass)
            v -= q.leftCols(k) * (q.leftCols(k).transpose() * v);
        const double after = v.norm();
        if (!(after > 1e-10 * before))
            return false;
        q.col(k) = v / after;
        tq.col(k) = apply_t(q.col(k));
        ++applications;
        ++k;
        return true;
    };

    std::mt19937_64 rng(0x5eedULL);
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        return v;
    };

    std::vector<Eigen::Index> frontier;
    for (int b = 0; b < kBlockSize; ++b)
        if (add(random_vector()))
            frontier.push_back(k - 1);

    Eigen::VectorXd theta;
    Eigen::MatrixXd x;
    Eigen::MatrixXd tx;
    const int keep_target = modes + kBlockSize;

    int restarts = 0;
    for (;;) {
        // Grow the subspace by one block.
        bool grown = false;
        if (k < max_dim) {
            std::vector<Eigen::Index> next;
            for (Eigen::Index j : frontier)
                if (add(tq.col(j)))
                    next.push_back(k - 1);
            if (next.empty() && k < n && add(random_vector()))
                next.push_back(k - 1);
            grown = !next.empty();
            frontier = std::move(next);
        }
        const bool full = k >= max_dim || !grown;
        if (k < std::min<Eigen::Index>(n, keep_target + kBlockSize) && !full)
            continue;

        Eigen::MatrixXd h = q.leftCols(k).transpose() * tq.leftCols(k);
        h = 0.5 * (h + h.transpose()).eval();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        if (es.info() != Eigen::Success)
            throw NumericalError("Rayleigh-Ritz eigensolve failed");
        const Eigen::Index keep = std::min<Eigen::Index>(k, keep_target);
        // Largest Ritz values of T are the smallest lambdas.
        const Eigen::MatrixXd y = es.eigenvectors().rightCols(keep).rowwise().reverse();
        theta = es.eigenvalues().tail(keep).reverse();
        x = q.leftCols(k) * y;
        tx = tq.leftCols(k) * y;

        bool converged = k >= n;
        if (!converged && keep >= modes) {
            converged = true;
            for (int j = 0; j < modes; ++j) {
                const double res = (tx.col(j) - theta(j) * x.col(j)).norm();
                if (!(theta(j) > 0.0) || res > 0.01 * tol * theta(j))
                    converged = false;
            }
        }
        if (converged)
            break;
        if (!full)
            continue;
        if (++restarts > 200)
            throw NumericalError("shift-invert iteration did not converge");

        // Thick restart: Ritz vectors plus their residual directions.
        q.leftCols(keep) = x;
        tq.leftCols(keep) = tx;
        k = keep;
        frontier.clear();
        Eigen::MatrixXd resid = tx - x * theta.asDiagonal();
        for (Eigen::Index j = 0; j < keep; ++j)
            if (add(resid.col(j)))
                frontier.push_back(k - 1);
    }

    if (theta.size() < modes)
        throw NumericalError("shift-invert: subspace smaller than requested mode count");

    EigenResult r;
    r.backend = Backend::ShiftInvert;
    r.iterations = applications;
    r.lambdas.resize(modes);
    r.u_modes.resize(n, modes);
    r.sigma_modes.resize(pencil.n_sigma(), modes);
    for (int j = 0; j < modes; ++j) {
        if (!(theta(j) > 0.0))
            throw NumericalError("eigenvalue positivity violated (non-positive Ritz value)");
        const double lambda = 1.0 / theta(j);
        Eigen::VectorXd u = x.col(j).cwiseQuotient(dsq);
        u /= std::sqrt(u.dot(pencil.m_diag.cwiseProduct(u)));
        // (sigma_t, u_t) solves the source problem with load M u, u_t ~ u / lambda.
        const auto src = saddle.solve(pencil.m_diag.cwiseProduct(u));
        r.lambdas(j) = lambda;
        r.u_modes.col(j) = u;
        r.sigma_modes.col(j) = lambda * src.sigma;
    }
    return r;
}

} // namespace

EigenResult solve_eigen(const GlobalPencil& pencil, const SolveOptions& opts)
{
    if (opts.modes < 1)
        throw ConfigError("mode count must be >= 1");
    if (opts.modes > pencil.n_u())
        throw ConfigError("requested " + std::to_string(opts.modes) + " modes but the mesh has only " +
                          std::to_string(pencil.n_u()) + " cells");

    EigenResult r = opts.backend == Backend::Dense ? solve_dense(pencil, opts.modes)
                                                   : solve_shift_invert(pencil, opts.modes, opts.tol);
    for (Eigen::Index j = 0; j < r.lambdas.size(); ++j)
        if (!(r.lambdas(j) > 0.0))
            throw NumericalError("eigenvalue positivity violated: lambda = " + std::to_string(r.lambdas(j)));

    fix_signs(r.u_modes, r.sigma_modes);
    r.residuals.resize(r.lambdas.size());
    for (Eigen::Index j = 0; j < r.lambdas.size(); ++j)
        r.residuals(j) = eigenpair_residual(pencil, r.lambdas(j), r.sigma_modes.col(j), r.u_modes.col(j));
    order_pairs(r);
    return r;
}

double eigenpair_residual(const GlobalPencil& pencil, double lambda, const Eigen::VectorXd& sigma,
                          const Eigen::VectorXd& u)
{
    const Eigen::VectorXd a_sigma = pencil.a * sigma;
    const Eigen::VectorXd bt_u = pencil.b.transpose() * u;
    const Eigen::VectorXd mu = pencil.m_diag.cwiseProduct(u);
    const double s1 = std::max(a_sigma.norm(), bt_u.norm());
    const double r1 = s1 > 0.0 ? (a_sigma + bt_u).norm() / s1 : 0.0;
    const double s2 = std::abs(lambda) * mu.norm();
    const Eigen::VectorXd second = pencil.b * sigma + lambda * mu;
    const double r2 = s2 > 0.0 ? second.norm() / s2 : second.norm();
    return std::max(r1, r2);
}

std::string_view to_string(Backend b) { return b == Backend::Dense ? "dense" : "shift-invert"; }

Backend parse_backend(std::string_view s)
{
    if (s == "dense")
        return Backend::Dense;
    if (s == "shift-invert")
        return Backend::ShiftInvert;
    throw ConfigError("unknown backend '" + std::string(s) + "' (dense|shift-invert|auto)");
}

Backend default_backend(Eigen::Index n_u) { return n_u <= 1200 ? Backend::Dense : Backend::ShiftInvert; }

} // namespace mixvem
