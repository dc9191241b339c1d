#pragma once

#include <vector>

namespace rkm {

/// All eigenvalues of a dense symmetric matrix (flat row-major, destroyed),
/// in ascending order. Householder reduction to tridiagonal form followed by
/// implicit-shift QL on the diagonal; eigenvectors are not accumulated.
///
/// `tol` scales the off-diagonal negligibility threshold; values at or below
/// machine epsilon request full precision. Throws ConvergenceFailureError if
/// the QL iteration does not settle within the iteration cap.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n, double tol = 0.0);

}  // namespace rkm
