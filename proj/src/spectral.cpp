#include "rkm/spectral.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "rkm/eigensym.hpp"
#include "rkm/errors.hpp"
#include "rkm/numeric.hpp"

namespace rkm {

CenteredGram gower_center(const SquaredDissimilarityMatrix& a) {
    const int n = a.size();
    std::vector<double> row_means(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) row_means[i] = pairwise_sum(a.row(i)) / n;
    const double grand_mean = pairwise_sum(row_means) / n;

    CenteredGram b;
    b.n = n;
    b.entries.resize(static_cast<std::size_t>(n) * n);
    // Each unordered pair is evaluated once and mirrored so B is symmetric
    // bit for bit, not merely up to rounding of the centering terms.
    for (int i = 0; i < n; ++i) {
        const std::span<const double> row = a.row(i);
        for (int j = i; j < n; ++j) {
            const double v = -0.5 * (row[j] - row_means[i] - row_means[j] + grand_mean);
            b.entries[static_cast<std::size_t>(i) * n + j] = v;
            b.entries[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return b;
}

double min_restricted_eigenvalue(const CenteredGram& b, double tol) {
    const int n = b.n;
    if (n <= 1) return 0.0;
    const int m = n - 1;

    // Householder reflector H = I - 2uu' exchanging e_0 with the unit
    // all-ones direction w. Since B w = 0, H B H has a zero first row and
    // column and its trailing (n-1) block carries the restricted spectrum.
    std::vector<double> u(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    u[0] -= 1.0;
    double norm = 0.0;
    for (double v : u) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : u) v /= norm;

    std::vector<double> bu(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += b(i, j) * u[j];
        bu[i] = s;
    }
    double gamma = 0.0;
    for (int i = 0; i < n; ++i) gamma += u[i] * bu[i];

    std::vector<double> restricted(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) {
            restricted[static_cast<std::size_t>(i - 1) * m + (j - 1)] =
                b(i, j) - 2.0 * u[i] * bu[j] - 2.0 * bu[i] * u[j] + 4.0 * gamma * u[i] * u[j];
        }
    }

    const std::vector<double> eigenvalues = symmetric_eigenvalues(std::move(restricted), m, tol);
    return eigenvalues.front();
}

double beta_star(const SquaredDissimilarityMatrix& a, double tol) {
    const double lambda_min = min_restricted_eigenvalue(gower_center(a), tol);
    return std::max(0.0, -2.0 * lambda_min);
}

double shifted_distance(double d_raw, double beta, double lambda_norm_sq) {
    return d_raw + 0.5 * beta * lambda_norm_sq;
}

double lazy_beta_increment(double d_neg, double lambda_norm_sq, double epsilon) {
    if (d_neg >= 0.0) {
        throw NonNegativeInputError("distance " + std::to_string(d_neg) + " is not negative");
    }
    if (lambda_norm_sq <= 0.0) {
        throw ZeroNormError("coefficient norm must be positive, got " +
                            std::to_string(lambda_norm_sq));
    }
    return -2.0 * d_neg / lambda_norm_sq + epsilon;
}

}  // namespace rkm
