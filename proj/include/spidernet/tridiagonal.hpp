#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spidernet {

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
struct TridiagonalEigen {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] belongs to values[k], unit norm
};

/// Number of eigenvalues strictly less than x (Sturm count of the LDL^T pivots).
std::size_t sturm_count(std::span<const double> diagonal, std::span<const double> off_diagonal,
                        double x);

/// Eigenvalues by Sturm bisection, eigenvectors by inverse iteration. Requires
/// nonzero off-diagonal entries (unreduced matrix), which makes every eigenvalue
/// simple. `tol` is the relative width at which bisection stops.
/// Throws ConvergenceFailure when inverse iteration does not reach a residual
/// of order tol * ||T||.
TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> off_diagonal,
                                             double tol = 1e-12);

}  // namespace spidernet
