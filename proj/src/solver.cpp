#include "rkm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "rkm/errors.hpp"
#include "rkm/spectral.hpp"

namespace rkm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Top 53 bits -> [0, 1). Hand-rolled so that the draw sequence is fixed by
// the generator alone, not by the standard library's distribution objects.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) via rejection sampling.
int uniform_below(std::mt19937_64& rng, int bound) {
    const auto range = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return static_cast<int>(draw % range);
}

void check_cluster_count(int n, int num_clusters) {
    if (num_clusters < 1) throw Error("num_clusters must be at least 1");
    if (num_clusters > n)
        throw TooManyClustersError("num_clusters " + std::to_string(num_clusters) + " exceeds point count " +
                                   std::to_string(n));
}

void check_config(const SolverConfig& config, int n) {
    check_cluster_count(n, config.num_clusters);
    if (config.max_iterations < 1) throw Error("max_iterations must be at least 1");
    if (config.restarts < 1) throw Error("restarts must be at least 1");
    if (!(config.objective_tolerance >= 0.0)) throw Error("objective_tolerance must be non-negative");
}

// D-squared seeding against an arbitrary squared-dissimilarity callback. The
// relational and coordinate paths share this template so that bit-identical
// dissimilarities consume the RNG stream identically.
template <typename DistFn>
std::vector<int> plusplus_labels(int n, int num_clusters, std::mt19937_64& rng, DistFn&& dist) {
    std::vector<int> seeds;
    seeds.reserve(static_cast<std::size_t>(num_clusters));
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    std::vector<double> min_dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

    const auto absorb = [&](int seed) {
        chosen[static_cast<std::size_t>(seed)] = 1;
        for (int i = 0; i < n; ++i) {
            const double d = dist(i, seed);
            auto& slot = min_dist[static_cast<std::size_t>(i)];
            if (d < slot) slot = d;
        }
    };

    seeds.push_back(uniform_below(rng, n));
    absorb(seeds.back());

    while (static_cast<int>(seeds.size()) < num_clusters) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (chosen[static_cast<std::size_t>(i)]) continue;
            total += std::max(0.0, min_dist[static_cast<std::size_t>(i)]);
        }
        int next = -1;
        if (total > 0.0) {
            const double target = uniform_unit(rng) * total;
            double cumulative = 0.0;
            for (int i = 0; i < n; ++i) {
                if (chosen[static_cast<std::size_t>(i)]) continue;
                cumulative += std::max(0.0, min_dist[static_cast<std::size_t>(i)]);
                if (target < cumulative) {
                    next = i;
                    break;
                }
                next = i;  // rounding can leave target == total: keep the last candidate
            }
        } else {
            // All remaining weights vanish (duplicate points): uniform fallback.
            int unchosen = 0;
            for (int i = 0; i < n; ++i) unchosen += chosen[static_cast<std::size_t>(i)] ? 0 : 1;
            int skip = uniform_below(rng, unchosen);
            for (int i = 0; i < n; ++i) {
                if (chosen[static_cast<std::size_t>(i)]) continue;
                if (skip-- == 0) {
                    next = i;
                    break;
                }
            }
        }
        seeds.push_back(next);
        absorb(next);
    }

    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_dist = dist(i, seeds[0]);
        for (int c = 1; c < num_clusters; ++c) {
            const double d = dist(i, seeds[static_cast<std::size_t>(c)]);
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

double query_distance(const ClusterStatsCache& cache, const BetaState& beta_state, int i, int c) {
    const double raw = cache.centroid_distance(i, c);
    if (beta_state.mode != BetaMode::lazy || beta_state.beta == 0.0) return raw;
    const double norm_sq = centroid_coefficient_norm_sq(cache.label(i) == c, cache.cluster_size(c));
    return shifted_distance(raw, beta_state.beta, norm_sq);
}

// Moves the point farthest from its own centroid (sole members exempt, ties
// to the lowest point index) into each empty cluster, lowest cluster first.
void repair_empty_clusters(ClusterStatsCache& cache, const BetaState& beta_state,
                           const SolverConfig& config) {
    const int n = cache.point_count();
    const int k = cache.cluster_count();
    while (true) {
        int empty = -1;
        for (int c = 0; c < k; ++c) {
            if (cache.cluster_size(c) == 0) {
                empty = c;
                break;
            }
        }
        if (empty < 0) return;
        if (config.empty_cluster_policy == EmptyClusterPolicy::error)
            throw EmptyClusterError("cluster " + std::to_string(empty) + " became empty");
        int donor = -1;
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (cache.cluster_size(cache.label(i)) <= 1) continue;
            const double d = query_distance(cache, beta_state, i, cache.label(i));
            if (d > worst) {
                worst = d;
                donor = i;
            }
        }
        cache.move_point(donor, empty);
    }
}

double current_objective(const ClusterStatsCache& cache, const BetaState& beta_state) {
    return cache.total_objective(beta_state.mode == BetaMode::lazy ? beta_state.beta : 0.0);
}

}  // namespace

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
    const std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;
    return splitmix64(seed + golden_gamma * (static_cast<std::uint64_t>(restart) + 1));
}

std::vector<int> init_random_partition(int n, int num_clusters, std::mt19937_64& rng) {
    check_cluster_count(n, num_clusters);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < num_clusters; ++i) labels[static_cast<std::size_t>(i)] = i;
    for (int i = num_clusters; i < n; ++i) labels[static_cast<std::size_t>(i)] = uniform_below(rng, num_clusters);
    return labels;
}

std::vector<int> init_plusplus(const SquaredDissimilarityMatrix& a, int num_clusters,
                               std::mt19937_64& rng) {
    check_cluster_count(a.size(), num_clusters);
    return plusplus_labels(a.size(), num_clusters, rng, [&](int i, int j) { return a(i, j); });
}

IterationResult lloyd_iterate(ClusterStatsCache& cache, BetaState& beta_state,
                              const SolverConfig& config, int iteration) {
    const int n = cache.point_count();
    const int k = cache.cluster_count();
    const std::vector<int> initial = cache.labeling();

    std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    const auto fill = [&]() {
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < k; ++c)
                dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)] =
                    query_distance(cache, beta_state, i, c);
    };
    fill();

    if (beta_state.mode == BetaMode::lazy) {
        // Bump beta until the sweep sees no negative distance. Each pass
        // zeroes the most negative entry exactly and lifts every other one,
        // so the loop clears at least one offender per pass.
        while (true) {
            int worst_i = -1;
            int worst_c = -1;
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int c = 0; c < k; ++c) {
                    const double d =
                        dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
                    if (d < worst) {
                        worst = d;
                        worst_i = i;
                        worst_c = c;
                    }
                }
            }
            if (worst_i < 0) break;
            const double norm_sq =
                centroid_coefficient_norm_sq(cache.label(worst_i) == worst_c, cache.cluster_size(worst_c));
            const double delta = lazy_beta_increment(worst, norm_sq);
            beta_state.bump(iteration, delta);
            for (int i = 0; i < n; ++i) {
                for (int c = 0; c < k; ++c) {
                    const double shift =
                        0.5 * delta * centroid_coefficient_norm_sq(cache.label(i) == c, cache.cluster_size(c));
                    dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)] +=
                        shift;
                }
            }
            dist[static_cast<std::size_t>(worst_i) * static_cast<std::size_t>(k) +
                 static_cast<std::size_t>(worst_c)] = 0.0;
        }
    }

    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_dist = dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(k)];
        for (int c = 1; c < k; ++c) {
            const double d =
                dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        if (best != cache.label(i)) cache.move_point(i, best);
    }

    repair_empty_clusters(cache, beta_state, config);

    int moved = 0;
    for (int i = 0; i < n; ++i)
        moved += cache.label(i) != initial[static_cast<std::size_t>(i)] ? 1 : 0;
    return {moved, current_objective(cache, beta_state)};
}

RunReport solve(const SquaredDissimilarityMatrix& a, const SolverConfig& config,
                const IterationObserver& observer) {
    check_config(config, a.size());

    const SquaredDissimilarityMatrix* working = &a;
    std::optional<SquaredDissimilarityMatrix> spread;
    double eager_beta = 0.0;
    if (config.beta_mode == BetaMode::eager) {
        eager_beta = beta_star(a);
        // Eigenvalue rounding reports a tiny positive beta_star on genuinely
        // Euclidean input; below noise level the spread is pure perturbation.
        if (eager_beta <= 2e-9 * a.scale()) eager_beta = 0.0;
        if (eager_beta > 0.0) {
            spread.emplace(apply_beta_spread(a, eager_beta));
            working = &*spread;
        }
    }

    const int n = working->size();
    const int k = config.num_clusters;
    std::optional<RunReport> best;

    for (int r = 0; r < config.restarts; ++r) {
        std::mt19937_64 rng(restart_seed(config.seed, r));
        std::vector<int> labels = config.init == InitMethod::random_partition
                                      ? init_random_partition(n, k, rng)
                                      : init_plusplus(*working, k, rng);

        BetaState beta_state{config.beta_mode, 0.0, {}};
        if (config.beta_mode == BetaMode::eager && eager_beta > 0.0) beta_state.bump(0, eager_beta);

        ClusterStatsCache cache(*working, std::move(labels), k);
        repair_empty_clusters(cache, beta_state, config);

        RunReport report;
        double previous = current_objective(cache, beta_state);
        if (observer) observer(r, 0, cache.labeling(), previous);

        for (int it = 1; it <= config.max_iterations; ++it) {
            const IterationResult step = lloyd_iterate(cache, beta_state, config, it);
            report.objective_trajectory.push_back(step.objective);
            if (observer) observer(r, it, cache.labeling(), step.objective);
            if (step.moved == 0) {
                report.converged = true;
                break;
            }
            if (previous - step.objective <
                config.objective_tolerance * std::max(std::abs(previous), std::abs(step.objective))) {
                report.converged = true;
                break;
            }
            previous = step.objective;
        }

        report.labels = cache.labeling();
        report.iterations = static_cast<int>(report.objective_trajectory.size());
        report.final_objective = report.objective_trajectory.back();
        report.beta_final = beta_state.beta;
        report.beta_increments = beta_state.increments;
        report.restart_index_of_best = r;
        if (!best || report.final_objective < best->final_objective) best = std::move(report);
    }
    return *best;
}

RunReport vector_kmeans_reference(const std::vector<std::vector<double>>& points,
                                  const SolverConfig& config, const IterationObserver& observer) {
    if (points.empty()) throw EmptyInputError("point set is empty");
    const int n = static_cast<int>(points.size());
    const int dim = static_cast<int>(points.front().size());
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != dim)
            throw DimensionMismatchError("points have inconsistent dimensions");
    check_config(config, n);

    const int k = config.num_clusters;
    std::vector<double> centroids(static_cast<std::size_t>(k) * static_cast<std::size_t>(dim), 0.0);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);

    const auto recompute_centroids = [&](const std::vector<int>& labels) {
        std::fill(centroids.begin(), centroids.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int c = labels[static_cast<std::size_t>(i)];
            ++sizes[static_cast<std::size_t>(c)];
            for (int j = 0; j < dim; ++j)
                centroids[static_cast<std::size_t>(c) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] +=
                    points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] == 0) continue;
            for (int j = 0; j < dim; ++j)
                centroids[static_cast<std::size_t>(c) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] /=
                    static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        }
    };
    const auto centroid_dist = [&](int i, int c) {
        return squared_euclidean(points[static_cast<std::size_t>(i)],
                                 std::span<const double>(centroids)
                                     .subspan(static_cast<std::size_t>(c) * static_cast<std::size_t>(dim),
                                              static_cast<std::size_t>(dim)));
    };
    const auto total_objective = [&](const std::vector<int>& labels) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += centroid_dist(i, labels[static_cast<std::size_t>(i)]);
        return sum;
    };
    const auto repair_empty = [&](std::vector<int>& labels) {
        while (true) {
            int empty = -1;
            for (int c = 0; c < k; ++c) {
                if (sizes[static_cast<std::size_t>(c)] == 0) {
                    empty = c;
                    break;
                }
            }
            if (empty < 0) return;
            if (config.empty_cluster_policy == EmptyClusterPolicy::error)
                throw EmptyClusterError("cluster " + std::to_string(empty) + " became empty");
            int donor = -1;
            double worst = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                const int c = labels[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(c)] <= 1) continue;
                const double d = centroid_dist(i, c);
                if (d > worst) {
                    worst = d;
                    donor = i;
                }
            }
            labels[static_cast<std::size_t>(donor)] = empty;
            recompute_centroids(labels);
        }
    };

    std::optional<RunReport> best;
    for (int r = 0; r < config.restarts; ++r) {
        std::mt19937_64 rng(restart_seed(config.seed, r));
        std::vector<int> labels =
            config.init == InitMethod::random_partition
                ? init_random_partition(n, k, rng)
                : plusplus_labels(n, k, rng, [&](int i, int j) {
                      return squared_euclidean(points[static_cast<std::size_t>(i)],
                                               points[static_cast<std::size_t>(j)]);
                  });
        recompute_centroids(labels);
        repair_empty(labels);

        RunReport report;
        double previous = total_objective(labels);
        if (observer) observer(r, 0, labels, previous);

        for (int it = 1; it <= config.max_iterations; ++it) {
            const std::vector<int> initial = labels;
            for (int i = 0; i < n; ++i) {
                int assigned = 0;
                double best_dist = centroid_dist(i, 0);
                for (int c = 1; c < k; ++c) {
                    const double d = centroid_dist(i, c);
                    if (d < best_dist) {
                        best_dist = d;
                        assigned = c;
                    }
                }
                labels[static_cast<std::size_t>(i)] = assigned;
            }
            recompute_centroids(labels);
            repair_empty(labels);

            const double objective = total_objective(labels);
            report.objective_trajectory.push_back(objective);
            if (observer) observer(r, it, labels, objective);

            int moved = 0;
            for (int i = 0; i < n; ++i)
                moved += labels[static_cast<std::size_t>(i)] != initial[static_cast<std::size_t>(i)] ? 1 : 0;
            if (moved == 0) {
                report.converged = true;
                break;
            }
            if (previous - objective <
                config.objective_tolerance * std::max(std::abs(previous), std::abs(objective))) {
                report.converged = true;
                break;
            }
            previous = objective;
        }

        report.labels = labels;
        report.iterations = static_cast<int>(report.objective_trajectory.size());
        report.final_objective = report.objective_trajectory.back();
        report.restart_index_of_best = r;
        if (!best || report.final_objective < best->final_objective) best = std::move(report);
    }
    return *best;
}

}  // namespace rkm
