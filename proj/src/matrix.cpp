#include "rkm/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "rkm/errors.hpp"

namespace rkm {

namespace {

std::string cell(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

SquaredDissimilarityMatrix SquaredDissimilarityMatrix::validate(
    const std::vector<std::vector<double>>& raw, std::optional<double> tolerance) {
    const int n = static_cast<int>(raw.size());
    if (n == 0) throw EmptyInputError("matrix has no rows");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(raw[i].size()) != n) {
            throw NonSquareError("row " + std::to_string(i) + " has " +
                                 std::to_string(raw[i].size()) + " entries, expected " +
                                 std::to_string(n));
        }
    }

    double max_abs = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = raw[i][j];
            if (!std::isfinite(v)) {
                throw NonFiniteError("non-finite entry at " + cell(i, j), i, j);
            }
            max_abs = std::max(max_abs, std::abs(v));
        }
    }

    const double tol = tolerance.value_or(1e-9 * max_abs);

    // Worst diagonal entry.
    int worst_diag = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(raw[i][i]) > std::abs(raw[worst_diag][worst_diag])) worst_diag = i;
    }
    if (std::abs(raw[worst_diag][worst_diag]) > tol) {
        throw NonzeroDiagonalError("diagonal entry " + std::to_string(worst_diag) + " is " +
                                       std::to_string(raw[worst_diag][worst_diag]),
                                   worst_diag);
    }

    // Worst asymmetric pair.
    int wi = 0, wj = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(raw[i][j] - raw[j][i]);
            if (gap > worst_gap) {
                worst_gap = gap;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst_gap > tol) {
        throw AsymmetryError("asymmetry " + std::to_string(worst_gap) + " at " + cell(wi, wj) +
                                 " exceeds tolerance " + std::to_string(tol),
                             wi, wj);
    }

    // Symmetrize by averaging; exact for quadratic forms. A grid that is
    // already symmetric with a zero diagonal comes back unchanged.
    std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
    bool has_negative = false;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v =
                raw[i][j] == raw[j][i] ? raw[i][j] : 0.5 * raw[i][j] + 0.5 * raw[j][i];
            entries[static_cast<std::size_t>(i) * n + j] = v;
            entries[static_cast<std::size_t>(j) * n + i] = v;
            if (v < 0.0) has_negative = true;
            scale = std::max(scale, std::abs(v));
        }
    }
    return SquaredDissimilarityMatrix(n, std::move(entries), scale, has_negative);
}

SquaredDissimilarityMatrix SquaredDissimilarityMatrix::from_points(
    const std::vector<std::vector<double>>& points) {
    const int n = static_cast<int>(points.size());
    if (n == 0) throw EmptyInputError("no points given");
    const std::size_t dim = points[0].size();
    for (int i = 1; i < n; ++i) {
        if (points[i].size() != dim) {
            throw DimensionMismatchError("point " + std::to_string(i) + " has dimension " +
                                         std::to_string(points[i].size()) + ", expected " +
                                         std::to_string(dim));
        }
    }

    std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = squared_euclidean(points[i], points[j]);
            if (!std::isfinite(v)) {
                throw NonFiniteError("non-finite squared distance at " + cell(i, j), i, j);
            }
            entries[static_cast<std::size_t>(i) * n + j] = v;
            entries[static_cast<std::size_t>(j) * n + i] = v;
            scale = std::max(scale, v);
        }
    }
    return SquaredDissimilarityMatrix(n, std::move(entries), scale, false);
}

SquaredDissimilarityMatrix apply_beta_spread(const SquaredDissimilarityMatrix& a, double beta) {
    if (beta < 0.0) throw NegativeBetaError("beta must be nonnegative, got " + std::to_string(beta));
    if (beta == 0.0) return a;
    const int n = a.size();
    std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
    double scale = 0.0;
    bool has_negative = false;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = a(i, j) + beta;
            entries[static_cast<std::size_t>(i) * n + j] = v;
            if (v < 0.0) has_negative = true;
            scale = std::max(scale, std::abs(v));
        }
    }
    return SquaredDissimilarityMatrix(n, std::move(entries), scale, has_negative);
}

}  // namespace rkm
