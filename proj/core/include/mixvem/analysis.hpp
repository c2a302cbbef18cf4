#pragma once

#include "mixvem/eigensolver.hpp"
#include "mixvem/mesh.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mixvem {

enum class Provenance { ClosedForm, Extrapolated };

struct ExactSpectrum {
    std::vector<double> values; // ascending, with multiplicity
    Provenance provenance = Provenance::ClosedForm;
};

/// Closed-form spectra: Dirichlet unit square, (m^2 + n^2) pi^2; mixed BC on
/// (-1,1)^2 with u = 0 at y = +-1 and zero flux at x = +-1, (pi^2/4)(k^2 + n^2),
/// k >= 0, n >= 1. Other configurations need `table` (used as Extrapolated).
ExactSpectrum exact_spectrum(Domain domain, BcSpec bc, int count,
                             std::optional<std::span<const double>> table = std::nullopt);

/// Least-squares slope of log|ref - lam_i| against log h_i. Returns +inf if
/// any error is exactly zero.
double fit_order(std::span<const double> h, std::span<const double> lam, double lam_ref);

struct Extrapolation {
    double lam_inf = 0.0;
    double order = 0.0;
    double constant = 0.0;
    int iterations = 0;
};

/// Fits lam_i ~ lam_inf + C h_i^alpha by Levenberg-Marquardt.
Extrapolation extrapolate(std::span<const double> h, std::span<const double> lam);

struct SpuriousReport {
    double window_max = 0.0;           // window is (0, window_max]
    int expected_count = 0;
    int computed_count = 0;
    std::vector<double> flagged;
    std::vector<int> match;            // per computed value: index into exact, or -1
};

inline constexpr double kSpuriousWindow = 0.35;

/// Greedy one-to-one matching in ascending order: each computed value takes
/// the closest unmatched exact value within `rel_window` relative distance.
SpuriousReport detect_spurious(std::span<const double> computed, const ExactSpectrum& exact,
                               double rel_window = kSpuriousWindow);

/// One discrete eigenproblem, mesh generation through eigensolve.
struct RunSpec {
    Domain domain = Domain::UnitSquare;
    MeshFamily family = MeshFamily::T2_squares;
    int n = 8;
    BcSpec bc = BcSpec::AllDirichlet;
    double w = 1.0;
    int modes = 6;
    std::uint64_t seed = 0;
    std::optional<Backend> backend;
};

struct RunResult {
    double h = 0.0;
    std::size_t n_cells = 0;
    Eigen::Index n_sigma = 0;
    EigenResult eigen;
};

RunResult run_single(const RunSpec& spec);

struct ConvergenceStudy {
    std::vector<int> n_values;
    std::vector<double> h_values;                    // strictly decreasing
    std::vector<std::vector<double>> lambda_series;  // [mode][level]
    std::vector<double> reference;                   // per mode, exact or extrapolated
    Provenance reference_provenance = Provenance::ClosedForm;
    std::vector<double> orders;                      // per mode
    std::vector<std::optional<Extrapolation>> extrapolated; // per mode (>= 3 levels)
};

/// Runs `base` for each N. Orders are fitted against the closed-form spectrum
/// when one exists, else against the extrapolated limits.
ConvergenceStudy convergence_study(const RunSpec& base, std::span<const int> n_list);

struct SweepRow {
    double w = 0.0;
    int n = 0;
    std::vector<double> lambdas;
};

struct StabilizationSweep {
    std::vector<double> w_values;
    std::vector<int> n_values;
    std::vector<SweepRow> rows;     // ordered by (w index, N index)
    std::vector<double> orders;     // mode-1 order per w
    std::vector<double> references; // mode-1 reference per w (exact, or extrapolated per w)
    Provenance reference_provenance = Provenance::ClosedForm;

    [[nodiscard]] const SweepRow& at(std::size_t w_index, std::size_t n_index) const;
};

/// Independent (w, N) jobs, run on up to `threads` workers; the result order
/// does not depend on scheduling.
StabilizationSweep stabilization_sweep(const RunSpec& base, std::span<const int> n_list,
                                       std::span<const double> w_list, unsigned threads = 0);

} // namespace mixvem
