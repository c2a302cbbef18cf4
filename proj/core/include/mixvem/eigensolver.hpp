#pragma once

#include "mixvem/assembly.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace mixvem {

enum class Backend {
    Dense,       // full symmetric eigendecomposition of M^{-1/2} S M^{-1/2}
    ShiftInvert, // block Krylov iteration on S^{-1} M via the saddle factorization
};

struct SolveOptions {
    int modes = 6;
    double tol = 1e-10;
    Backend backend = Backend::Dense;
};

struct EigenResult {
    Eigen::VectorXd lambdas;     // ascending
    Eigen::MatrixXd u_modes;     // n_u x m, M-orthonormal columns
    Eigen::MatrixXd sigma_modes; // n_sigma x m
    Eigen::VectorXd residuals;   // per pair, see eigenpair_residual
    Backend backend = Backend::Dense;
    int iterations = 0;          // Krylov dimension used (0 for Dense)
};

/// Smallest `modes` eigenpairs of S u = lambda M u, S = B A^{-1} B^T,
/// sigma = -A^{-1} B^T u. Eigenvectors are sign-fixed so that their first
/// significant entry is positive.
EigenResult solve_eigen(const GlobalPencil& pencil, const SolveOptions& opts = {});

/// max( |A s + B^T u| / max(|A s|, |B^T u|),  |B s + lambda M u| / (lambda |M u|) ).
double eigenpair_residual(const GlobalPencil& pencil, double lambda,
                          const Eigen::VectorXd& sigma, const Eigen::VectorXd& u);

[[nodiscard]] std::string_view to_string(Backend b);
[[nodiscard]] Backend parse_backend(std::string_view s);

/// Backend picked by size when the caller has no preference.
[[nodiscard]] Backend default_backend(Eigen::Index n_u);

} // namespace mixvem
