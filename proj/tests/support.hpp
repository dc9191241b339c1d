#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written as plain loops against raw grids so that
// library results are checked against arithmetic that shares no code with
// the implementation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "rkm/matrix.hpp"

namespace support {

using Grid = std::vector<std::vector<double>>;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Grid random_points(std::mt19937_64& rng, int n, int d, double spread = 10.0) {
    Grid points(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& p : points)
        for (auto& x : p) x = uniform(rng, -spread, spread);
    return points;
}

/// Symmetric, zero-diagonal grid; a `negative_fraction` of the off-diagonal
/// entries is negated. Such grids are valid inputs and usually far from
/// Euclidean.
inline Grid random_symmetric_grid(std::mt19937_64& rng, int n, double magnitude = 10.0,
                                  double negative_fraction = 0.0) {
    Grid g(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = uniform(rng, 0.0, magnitude);
            if (negative_fraction > 0.0 && uniform(rng, 0.0, 1.0) < negative_fraction) v = -v;
            g[i][j] = g[j][i] = v;
        }
    }
    return g;
}

/// Random labeling of n points into num_clusters clusters with every cluster
/// nonempty.
inline std::vector<int> random_labeling(std::mt19937_64& rng, int n, int num_clusters) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < num_clusters; ++i) labels[i] = i;
    for (int i = num_clusters; i < n; ++i) labels[i] = uniform_int(rng, 0, num_clusters - 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

/// Zero-sum vector: the residual after mean subtraction is folded into the
/// largest-magnitude slot so the sum is exactly representable noise.
inline std::vector<double> random_zero_sum(std::mt19937_64& rng, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uniform(rng, -1.0, 1.0);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    for (auto& x : v) x -= mean;
    double residual = 0.0;
    for (double x : v) residual += x;
    auto top = std::max_element(v.begin(), v.end(),
                                [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    *top -= residual;
    return v;
}

inline Grid to_grid(const rkm::SquaredDissimilarityMatrix& m) {
    Grid g(static_cast<std::size_t>(m.size()), std::vector<double>(static_cast<std::size_t>(m.size())));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) g[i][j] = m(i, j);
    return g;
}

/// -1/2 lambda' A lambda by the plain double loop.
inline double direct_form(const Grid& a, const std::vector<double>& lambda) {
    const int n = static_cast<int>(a.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += lambda[i] * lambda[j] * a[i][j];
    return -0.5 * acc;
}

/// Centroid distance via the expansion, plain loops over the member list.
inline double direct_centroid_distance(const Grid& a, int i, const std::vector<int>& members) {
    const double s = static_cast<double>(members.size());
    double point_sum = 0.0;
    for (int j : members) point_sum += a[i][j];
    double within = 0.0;
    for (int j : members)
        for (int k : members) within += a[j][k];
    return point_sum / s - within / (2.0 * s * s);
}

/// B = -1/2 J A J by direct evaluation.
inline Grid direct_gower(const Grid& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> row_mean(static_cast<std::size_t>(n), 0.0);
    double grand = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) row_mean[i] += a[i][j];
        grand += row_mean[i];
        row_mean[i] /= n;
    }
    grand /= static_cast<double>(n) * n;
    Grid b(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = -0.5 * (a[i][j] - row_mean[i] - row_mean[j] + grand);
    return b;
}

/// Full eigenvalue spectrum of a symmetric matrix by cyclic Jacobi rotations,
/// ascending. Independent of the library's Householder/QL path.
inline std::vector<double> jacobi_spectrum(Grid a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return {};
    double frob = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += a[i][j] * a[i][j];
    const double stop = 1e-28 * (frob + 1.0);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off <= stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = a[p][k] = c * akp - s * akq;
                    a[k][q] = a[q][k] = s * akp + c * akq;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[i] = a[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Minimum eigenvalue of B over the hyperplane perpendicular to the all-ones
/// vector, read off the full Jacobi spectrum: B annihilates the ones
/// direction, so drop the spectrum entry nearest zero and take the minimum
/// of the rest.
inline double jacobi_min_restricted(const Grid& b) {
    const int n = static_cast<int>(b.size());
    if (n <= 1) return 0.0;
    std::vector<double> eig = jacobi_spectrum(b);
    std::size_t drop = 0;
    for (std::size_t i = 1; i < eig.size(); ++i)
        if (std::fabs(eig[i]) < std::fabs(eig[drop])) drop = i;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eig.size(); ++i)
        if (i != drop) best = std::min(best, eig[i]);
    return best;
}

inline double max_abs(const Grid& g) {
    double m = 0.0;
    for (const auto& row : g)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace support
