#pragma once

#include <cstddef>
#include <vector>

#include "rkm/matrix.hpp"

namespace rkm {

/// Gower double-centered matrix B = -1/2 J A J with J = I - (1/n) 1 1'.
/// For every zero-sum lambda, lambda' B lambda = -1/2 lambda' A lambda, so B
/// carries the restriction of the form A to the hyperplane perpendicular to
/// the all-ones vector. B is positive semidefinite on that hyperplane exactly
/// when A is Euclidean-embeddable.
struct CenteredGram {
    int n = 0;
    std::vector<double> entries;  // flat row-major

    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

CenteredGram gower_center(const SquaredDissimilarityMatrix& a);

/// Minimum eigenvalue of B over the hyperplane perpendicular to the all-ones
/// vector. The structural zero eigenvalue along that vector is removed by an
/// exact Householder deflation to an (n-1)-dimensional subproblem, so the
/// result is meaningful even when it is positive. Returns 0 for n = 1.
/// Throws ConvergenceFailureError.
double min_restricted_eigenvalue(const CenteredGram& b, double tol = 0.0);

/// Minimal uniform spread that makes every generalized centroid distance
/// nonnegative: max(0, -2 lambda_min) where lambda_min is the restricted
/// minimum eigenvalue of gower_center(a). The spread lifts every restricted
/// eigenvalue by beta/2.
double beta_star(const SquaredDissimilarityMatrix& a, double tol = 0.0);

// apply_beta_spread(a, beta) is declared in matrix.hpp: adds beta to every
// off-diagonal entry, leaving the diagonal at zero.

/// Distance under the beta-spread matrix from the distance under the raw
/// matrix: d + (beta/2) |lambda|^2. For zero-sum lambda the rank-one part of
/// the spread vanishes, leaving only this norm term.
double shifted_distance(double d_raw, double beta, double lambda_norm_sq);

/// Spread increment that lifts an observed negative distance to exactly
/// epsilon * |lambda|^2 / 2: delta = -2 d_neg / |lambda|^2 + epsilon.
/// Throws NonNegativeInputError if d_neg >= 0, ZeroNormError if the norm
/// vanishes.
double lazy_beta_increment(double d_neg, double lambda_norm_sq, double epsilon = 0.0);

enum class BetaMode { off, eager, lazy };

struct BetaIncrement {
    int iteration = 0;  // 0 = before the first Lloyd iteration
    double delta = 0.0;
};

/// Running beta of the spread transformation. Non-decreasing over a run;
/// mode `off` keeps it at zero forever.
struct BetaState {
    BetaMode mode = BetaMode::off;
    double beta = 0.0;
    std::vector<BetaIncrement> increments;

    void bump(int iteration, double delta) {
        beta += delta;
        increments.push_back({iteration, delta});
    }
};

}  // namespace rkm
