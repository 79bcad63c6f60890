#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lyricsim {

struct PcaOptions {
    std::size_t dims = 50;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;          ///< residual bound relative to the leading eigenvalue
    std::size_t max_iterations = 1000;
    std::size_t oversample = 10;      ///< extra block columns carried by the subspace iteration
};

struct PrincipalComponents {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;   ///< dims rows, each orthonormal
    std::vector<double> explained_variance;        ///< nonincreasing, sample covariance (n - 1)
    std::size_t iterations = 0;
};

/// Principal directions of `rows` (each a point in R^d).
///
/// Orthogonal subspace iteration on the sample covariance with a
/// Rayleigh-Ritz step each sweep. Iteration stops once every requested Ritz
/// pair satisfies ||C v - theta v|| <= tolerance * theta_max. Columns that
/// collapse (rank-deficient data) are refilled from the seeded generator and
/// re-orthogonalized, so zero-variance directions come out orthonormal too.
/// Each component is sign-fixed so its largest-magnitude entry is positive.
///
/// Throws InsufficientData if there are fewer than dims + 1 rows or fewer
/// than dims columns, ConvergenceFailure if the tolerance is not met.
PrincipalComponents fit_principal_components(const std::vector<std::vector<double>>& rows, const PcaOptions& options);

/// Symmetric eigen-decomposition by cyclic Jacobi rotations. `a` is n x n
/// row-major. Eigenvalues come back in descending order; eigenvectors are
/// the columns of the returned row-major n x n matrix.
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n);

} // namespace lyricsim
