#pragma once

#include <mixvem/analysis.hpp>
#include <mixvem/mesh.hpp>

#include <json.hpp>

#include <string>

namespace mixvem::cli {

/// Table layout: `N,lambda_1,...`, one row per level, then `Order` and
/// `Exact` (or `Extrap`) footer rows.
std::string convergence_csv(const ConvergenceStudy& study);

/// Mode-1 eigenvalue per (N, w): `N,w=...`, one row per level, footers as above.
std::string sweep_csv(const StabilizationSweep& sweep);

/// Single-run table: `N,lambda_1,...` with one row.
std::string eigenvalues_csv(int n, const EigenResult& result);

nlohmann::ordered_json to_json(const QualityReport& q);
nlohmann::ordered_json to_json(const ConvergenceStudy& study);
nlohmann::ordered_json to_json(const StabilizationSweep& sweep);
nlohmann::ordered_json to_json(const SpuriousReport& report, std::span<const double> computed,
                               const ExactSpectrum& exact);

/// Serialized with a trailing newline; doubles keep full precision.
std::string dump(const nlohmann::ordered_json& j);

} // namespace mixvem::cli
