#include "mixvem/analysis.hpp"

#include "mixvem/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace mixvem {

// ---------------------------------------------------------------------------
// Reference spectra

ExactSpectrum exact_spectrum(Domain domain, BcSpec bc, int count, std::optional<std::span<const double>> table)
{
    if (count < 0)
        throw ConfigError("negative eigenvalue count");
    ExactSpectrum out;
    if (domain == Domain::LShape) {
        if (!table)
            throw ConfigError("no closed-form spectrum on the L-shape; supply an extrapolated table");
        if (static_cast<int>(table->size()) < count)
            throw ConfigError("extrapolated table shorter than requested count");
        out.values.assign(table->begin(), table->begin() + count);
        std::sort(out.values.begin(), out.values.end());
        out.provenance = Provenance::Extrapolated;
        return out;
    }

    // Separation of variables on a square of side L: Dirichlet in y gives
    // n >= 1; x is Dirichlet (m >= 1) or zero-flux (m >= 0).
    const double side = domain == Domain::SymSquare ? 2.0 : 1.0;
    const double base = std::numbers::pi * std::numbers::pi / (side * side);
    const int first_m = bc == BcSpec::AllDirichlet ? 1 : 0;
    const int top = count + 2;
    std::vector<double> all;
    for (int m = first_m; m <= top; ++m)
        for (int n = 1; n <= top; ++n)
            all.push_back(base * (m * m + n * n));
    std::sort(all.begin(), all.end());
    out.values.assign(all.begin(), all.begin() + count);
    out.provenance = Provenance::ClosedForm;
    return out;
}

// ---------------------------------------------------------------------------
// Convergence orders and extrapolation

double fit_order(std::span<const double> h, std::span<const double> lam, double lam_ref)
{
    if (h.size() != lam.size() || h.size() < 2)
        throw ConfigError("fit_order needs at least two (h, lambda) pairs");
    const std::size_t n = h.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = std::abs(lam_ref - lam[i]);
        if (err == 0.0)
            return std::numeric_limits<double>::infinity();
        const double x = std::log(h[i]);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

Extrapolation extrapolate(std::span<const double> h, std::span<const double> lam)
{
    if (h.size() != lam.size() || h.size() < 3)
        throw ConfigError("extrapolation needs at least three refinement levels");
    const std::size_t n = h.size();

    const std::size_t finest = static_cast<std::size_t>(std::min_element(h.begin(), h.end()) - h.begin());
    Eigen::Vector3d p; // lam_inf, C, alpha
    p(0) = lam[finest];
    p(2) = 2.0;
    {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = h[i] * h[i];
            num += t * (lam[i] - p(0));
            den += t * t;
        }
        p(1) = num / den;
    }

    auto residual = [&](const Eigen::Vector3d& q) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            r(static_cast<Eigen::Index>(i)) = q(0) + q(1) * std::pow(h[i], q(2)) - lam[i];
        return r;
    };
    auto jacobian = [&](const Eigen::Vector3d& q) {
        Eigen::MatrixXd j(static_cast<Eigen::Index>(n), 3);
        for (std::size_t i = 0; i < n; ++i) {
            const double hp = std::pow(h[i], q(2));
            const auto row = static_cast<Eigen::Index>(i);
            j(row, 0) = 1.0;
            j(row, 1) = hp;
            j(row, 2) = q(1) * hp * std::log(h[i]);
        }
        return j;
    };

    double damping = 1e-3;
    Eigen::VectorXd r = residual(p);
    double cost = r.squaredNorm();
    double scale = 0.0;
    for (double v : lam)
        scale = std::max(scale, std::abs(v));

    for (int it = 1; it <= 200; ++it) {
        if (cost <= 1e-30 * std::max(1.0, scale * scale))
            return {p(0), p(2), p(1), it - 1};
        const Eigen::MatrixXd j = jacobian(p);
        const Eigen::Matrix3d jtj = j.transpose() * j;
        const Eigen::Vector3d g = j.transpose() * r;
        const double floor = 1e-12 * jtj.diagonal().maxCoeff();
        Eigen::Matrix3d lhs = jtj;
        for (int k = 0; k < 3; ++k)
            lhs(k, k) += damping * std::max(jtj(k, k), floor);
        const Eigen::Vector3d step = lhs.ldlt().solve(-g);
        const Eigen::Vector3d trial = p + step;
        const Eigen::VectorXd r_trial = residual(trial);
        const double cost_trial = r_trial.squaredNorm();
        const bool small = step.lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + p.lpNorm<Eigen::Infinity>());
        if (std::isfinite(cost_trial) && cost_trial <= cost) {
            p = trial;
            r = r_trial;
            cost = cost_trial;
            damping = std::max(damping / 3.0, 1e-12);
        } else {
            damping *= 4.0;
        }
        if (small)
            return {p(0), p(2), p(1), it};
    }
    throw NumericalError("extrapolation did not converge in 200 iterations");
}

// ---------------------------------------------------------------------------
// Spurious eigenvalues

SpuriousReport detect_spurious(std::span<const double> computed, const ExactSpectrum& exact, double rel_window)
{
    if (!(rel_window > 0.0 && rel_window < 1.0))
        throw ConfigError("relative window must lie in (0, 1)");
    std::vector<double> sorted(computed.begin(), computed.end());
    std::sort(sorted.begin(), sorted.end());

    SpuriousReport rep;
    std::vector<char> taken(exact.values.size(), 0);
    for (double c : sorted) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < exact.values.size(); ++e) {
            if (taken[e])
                continue;
            const double ex = exact.values[e];
            const double dist = std::abs(c - ex) / ex;
            if (dist <= rel_window && dist < best_dist) {
                best = static_cast<int>(e);
                best_dist = dist;
            }
        }
        rep.match.push_back(best);
        if (best < 0) {
            rep.flagged.push_back(c);
        } else {
            taken[static_cast<std::size_t>(best)] = 1;
            rep.window_max = std::max(rep.window_max, exact.values[static_cast<std::size_t>(best)]);
        }
    }
    rep.expected_count = static_cast<int>(
        std::count_if(exact.values.begin(), exact.values.end(), [&](double v) { return v > 0.0 && v <= rep.window_max; }));
    rep.computed_count = static_cast<int>(
        std::count_if(sorted.begin(), sorted.end(), [&](double v) { return v > 0.0 && v <= rep.window_max; }));
    return rep;
}

// ---------------------------------------------------------------------------
// Experiment drivers

RunResult run_single(const RunSpec& spec)
{
    const StabWeight w(spec.w);
    const PolygonalMesh mesh = tag_boundary(generate(spec.domain, spec.family, spec.n, spec.seed), spec.bc);
    const AssembledSystem sys = assemble(mesh, w);
    SolveOptions opts;
    opts.modes = spec.modes;
    // A is only semidefinite without stabilization; the saddle route copes.
    opts.backend = spec.backend.value_or(spec.w == 0.0 ? Backend::ShiftInvert : default_backend(sys.pencil.n_u()));
    RunResult out;
    out.h = mesh.mesh_size();
    out.n_cells = mesh.num_cells();
    out.n_sigma = sys.pencil.n_sigma();
    out.eigen = solve_eigen(sys.pencil, opts);
    return out;
}

namespace {

bool has_closed_form(Domain d) { return d != Domain::LShape; }

std::vector<double> reference_values(const RunSpec& base, int modes)
{
    return exact_spectrum(base.domain, base.bc, modes).values;
}

} // namespace

ConvergenceStudy convergence_study(const RunSpec& base, std::span<const int> n_list)
{
    if (n_list.size() < 2)
        throw ConfigError("a convergence study needs at least two refinement levels");
    ConvergenceStudy study;
    study.n_values.assign(n_list.begin(), n_list.end());
    study.lambda_series.assign(static_cast<std::size_t>(base.modes), {});
    for (int n : n_list) {
        RunSpec spec = base;
        spec.n = n;
        const RunResult r = run_single(spec);
        if (!study.h_values.empty() && !(r.h < study.h_values.back()))
            throw ConfigError("refinement levels must give strictly decreasing mesh sizes");
        study.h_values.push_back(r.h);
        for (int m = 0; m < base.modes; ++m)
            study.lambda_series[static_cast<std::size_t>(m)].push_back(r.eigen.lambdas(m));
    }

    for (int m = 0; m < base.modes; ++m) {
        const auto& series = study.lambda_series[static_cast<std::size_t>(m)];
        std::optional<Extrapolation> fit;
        if (series.size() >= 3) {
            try {
                fit = extrapolate(study.h_values, series);
            } catch (const NumericalError&) {
                // Only fatal when the extrapolated limit is the reference.
                if (!has_closed_form(base.domain))
                    throw;
            }
        }
        study.extrapolated.push_back(fit);
    }
    if (has_closed_form(base.domain)) {
        study.reference = reference_values(base, base.modes);
        study.reference_provenance = Provenance::ClosedForm;
    } else {
        if (n_list.size() < 3)
            throw ConfigError("no closed-form spectrum: extrapolation needs at least three levels");
        for (const auto& e : study.extrapolated)
            study.reference.push_back(e->lam_inf);
        study.reference_provenance = Provenance::Extrapolated;
    }
    for (int m = 0; m < base.modes; ++m)
        study.orders.push_back(fit_order(study.h_values, study.lambda_series[static_cast<std::size_t>(m)],
                                         study.reference[static_cast<std::size_t>(m)]));
    return study;
}

const SweepRow& StabilizationSweep::at(std::size_t w_index, std::size_t n_index) const
{
    return rows.at(w_index * n_values.size() + n_index);
}

StabilizationSweep stabilization_sweep(const RunSpec& base, std::span<const int> n_list,
                                       std::span<const double> w_list, unsigned threads)
{
    if (n_list.size() < 2 || w_list.empty())
        throw ConfigError("a sweep needs at least two N values and one w value");
    StabilizationSweep sweep;
    sweep.w_values.assign(w_list.begin(), w_list.end());
    sweep.n_values.assign(n_list.begin(), n_list.end());
    const std::size_t jobs = w_list.size() * n_list.size();
    sweep.rows.resize(jobs);
    std::vector<double> h(n_list.size(), 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t wi = job / n_list.size();
            const std::size_t ni = job % n_list.size();
            try {
                RunSpec spec = base;
                spec.w = w_list[wi];
                spec.n = n_list[ni];
                const RunResult r = run_single(spec);
                SweepRow& row = sweep.rows[job];
                row.w = spec.w;
                row.n = spec.n;
                row.lambdas.assign(r.eigen.lambdas.data(), r.eigen.lambdas.data() + r.eigen.lambdas.size());
                if (wi == 0)
                    h[ni] = r.h;
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, threads == 0 ? hw : threads));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < count; ++t)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);

    const bool closed = has_closed_form(base.domain);
    sweep.reference_provenance = closed ? Provenance::ClosedForm : Provenance::Extrapolated;
    const double exact1 = closed ? reference_values(base, 1).front() : 0.0;
    for (std::size_t wi = 0; wi < w_list.size(); ++wi) {
        std::vector<double> series;
        for (std::size_t ni = 0; ni < n_list.size(); ++ni)
            series.push_back(sweep.at(wi, ni).lambdas.front());
        const double ref = closed ? exact1 : extrapolate(h, series).lam_inf;
        sweep.references.push_back(ref);
        sweep.orders.push_back(fit_order(h, series, ref));
    }
    return sweep;
}

} // namespace mixvem
