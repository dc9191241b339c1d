#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "rkm/matrix.hpp"
#include "rkm/relational.hpp"
#include "rkm/spectral.hpp"

namespace rkm {

enum class InitMethod { random_partition, plusplus };
enum class EmptyClusterPolicy { repair_farthest, error };

struct SolverConfig {
    int num_clusters = 1;
    int max_iterations = 300;
    double objective_tolerance = 1e-8;  // relative stall guard
    std::uint64_t seed = 0;
    InitMethod init = InitMethod::plusplus;
    BetaMode beta_mode = BetaMode::eager;
    int restarts = 1;
    EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::repair_farthest;
};

struct RunReport {
    std::vector<int> labels;
    double final_objective = 0.0;
    std::vector<double> objective_trajectory;  // one entry per Lloyd iteration
    int iterations = 0;
    bool converged = false;
    double beta_final = 0.0;
    std::vector<BetaIncrement> beta_increments;
    int restart_index_of_best = 0;
};

/// Called with the labeling after initialization (iteration 0) and after
/// every Lloyd iteration, for every restart. Lets tests compare label
/// trajectories step by step.
using IterationObserver =
    std::function<void(int restart, int iteration, std::span<const int> labels, double objective)>;

/// Seed of the RNG sub-stream for one restart. Fixed contract within this
/// repository: splitmix64 of (seed + golden_gamma * (restart + 1)), driving
/// an mt19937_64.
std::uint64_t restart_seed(std::uint64_t seed, int restart);

/// Points 0..N-1 take labels 0..N-1 (every cluster nonempty by
/// construction); the rest are labeled uniformly at random.
/// Throws TooManyClustersError.
std::vector<int> init_random_partition(int n, int num_clusters, std::mt19937_64& rng);

/// D-squared seeding on the dissimilarity matrix: the first seed is uniform,
/// each next one is sampled proportionally to max(0, min dissimilarity to
/// the chosen seeds); degenerate all-zero weights fall back to uniform over
/// the unchosen points. Every point then joins its nearest seed, ties going
/// to the lowest seed index. Throws TooManyClustersError.
std::vector<int> init_plusplus(const SquaredDissimilarityMatrix& a, int num_clusters,
                               std::mt19937_64& rng);

struct IterationResult {
    int moved = 0;  // points whose label differs from the start of the iteration
    double objective = 0.0;
};

/// One batch Lloyd iteration: compute all point-to-cluster distances
/// (shifted by the running beta in lazy mode, bumping beta until no distance
/// is negative), move every point to its nearest cluster with ties broken
/// toward the lowest cluster id, then repair empty clusters per policy by
/// donating the point farthest from its own centroid (sole members exempt).
///
/// `iteration` only tags beta increments in the state log.
/// Throws EmptyClusterError under the `error` policy.
IterationResult lloyd_iterate(ClusterStatsCache& cache, BetaState& beta_state,
                              const SolverConfig& config, int iteration = 1);

/// Full clustering run. Eager mode replaces the matrix by its beta_star
/// spread before iterating; each restart draws its own RNG sub-stream and
/// the report of the restart with the lowest final objective wins (ties to
/// the lowest restart index). Deterministic given the seed.
RunReport solve(const SquaredDissimilarityMatrix& a, const SolverConfig& config,
                const IterationObserver& observer = {});

/// Classic coordinate-space k-means with explicitly averaged centroids,
/// sharing the initialization streams, tie-breaking and convergence rules of
/// solve() so that runs on from_points input are comparable step by step.
/// Serves as the independent reference for the relational path; beta modes
/// do not apply.
RunReport vector_kmeans_reference(const std::vector<std::vector<double>>& points,
                                  const SolverConfig& config,
                                  const IterationObserver& observer = {});

}  // namespace rkm
