#include "rkm/relational.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "rkm/errors.hpp"
#include "rkm/numeric.hpp"

namespace rkm {

CoefficientVector::CoefficientVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    std::vector<double> abs_terms(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) abs_terms[j] = std::abs(coeffs_[j]);
    const double sum = pairwise_sum(coeffs_);
    const double abs_sum = pairwise_sum(abs_terms);
    if (std::abs(sum) > 1e-12 * abs_sum) {
        throw NonZeroSumError("coefficient sum " + std::to_string(sum) +
                              " is not zero (tolerance " + std::to_string(1e-12 * abs_sum) + ")");
    }
}

CoefficientVector CoefficientVector::centroid(int i, const std::vector<int>& members, int n) {
    if (members.empty()) throw EmptyClusterError("centroid of an empty cluster");
    if (i < 0 || i >= n) {
        throw IndexOutOfRangeError("point index " + std::to_string(i) + " out of range " +
                                   std::to_string(n));
    }
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    int size = 0;
    for (int j : members) {
        if (j < 0 || j >= n) {
            throw IndexOutOfRangeError("member index " + std::to_string(j) + " out of range " +
                                       std::to_string(n));
        }
        if (!in_set[j]) {
            in_set[j] = 1;
            ++size;
        }
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
    const double w = 1.0 / size;
    for (int j = 0; j < n; ++j) {
        if (in_set[j]) coeffs[j] = w;
    }
    coeffs[i] -= 1.0;
    return CoefficientVector(Trusted{}, std::move(coeffs));
}

double CoefficientVector::norm_sq() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return s;
}

double quadratic_form_distance(const SquaredDissimilarityMatrix& a,
                               const CoefficientVector& lambda) {
    if (lambda.size() != a.size()) {
        throw LengthMismatchError("coefficient vector length " + std::to_string(lambda.size()) +
                                  " does not match matrix size " + std::to_string(a.size()));
    }
    const int n = a.size();
    double form = 0.0;
    for (int i = 0; i < n; ++i) {
        if (lambda[i] == 0.0) continue;
        const std::span<const double> row = a.row(i);
        double t = 0.0;
        for (int j = 0; j < n; ++j) t += lambda[j] * row[j];
        form += lambda[i] * t;
    }
    return -0.5 * form;
}

double centroid_coefficient_norm_sq(bool member, int cluster_size) {
    return member ? 1.0 - 1.0 / cluster_size : 1.0 + 1.0 / cluster_size;
}

ClusterStatsCache::ClusterStatsCache(const SquaredDissimilarityMatrix& a, std::vector<int> labeling,
                                     int num_clusters)
    : a_(&a),
      n_(a.size()),
      num_clusters_(num_clusters),
      labeling_(std::move(labeling)),
      sizes_(static_cast<std::size_t>(num_clusters), 0),
      point_cluster_sums_(static_cast<std::size_t>(a.size()) * num_clusters, 0.0),
      within_sums_(static_cast<std::size_t>(num_clusters), 0.0) {
    if (static_cast<int>(labeling_.size()) != n_) {
        throw LengthMismatchError("labeling length does not match matrix size");
    }
    for (int i = 0; i < n_; ++i) {
        const int c = labeling_[i];
        if (c < 0 || c >= num_clusters_) {
            throw IndexOutOfRangeError("label " + std::to_string(c) + " of point " +
                                       std::to_string(i) + " out of range");
        }
        ++sizes_[c];
    }
    for (int i = 0; i < n_; ++i) {
        const std::span<const double> row = a_->row(i);
        double* sums = &point_cluster_sums_[static_cast<std::size_t>(i) * num_clusters_];
        for (int j = 0; j < n_; ++j) sums[labeling_[j]] += row[j];
    }
    // W_c = sum of the member rows' cluster sums, pairwise over members.
    std::vector<double> member_terms;
    member_terms.reserve(n_);
    for (int c = 0; c < num_clusters_; ++c) {
        member_terms.clear();
        for (int i = 0; i < n_; ++i) {
            if (labeling_[i] == c) member_terms.push_back(point_cluster_sum(i, c));
        }
        within_sums_[c] = pairwise_sum(member_terms);
    }
}

void ClusterStatsCache::move_point(int i, int to) {
    if (i < 0 || i >= n_) {
        throw IndexOutOfRangeError("point index " + std::to_string(i) + " out of range");
    }
    if (to < 0 || to >= num_clusters_) {
        throw IndexOutOfRangeError("cluster id " + std::to_string(to) + " out of range");
    }
    const int from = labeling_[i];
    if (from == to) return;

    // Within sums first, while the point-to-cluster sums still describe the
    // old memberships. A_ii = 0 keeps both formulas exact at the boundary.
    within_sums_[from] -= 2.0 * point_cluster_sum(i, from);
    within_sums_[to] += 2.0 * point_cluster_sum(i, to);

    const std::span<const double> row = a_->row(i);
    for (int j = 0; j < n_; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * num_clusters_;
        point_cluster_sums_[base + from] -= row[j];
        point_cluster_sums_[base + to] += row[j];
    }
    --sizes_[from];
    ++sizes_[to];
    labeling_[i] = to;
}

double ClusterStatsCache::centroid_distance(int i, int c) const {
    const int s = sizes_[c];
    if (s == 0) throw EmptyClusterError("cluster " + std::to_string(c) + " is empty");
    return point_cluster_sum(i, c) / s - within_sums_[c] / (2.0 * s * s);
}

double ClusterStatsCache::total_objective(double beta) const {
    double obj = 0.0;
    for (int c = 0; c < num_clusters_; ++c) {
        const int s = sizes_[c];
        if (s == 0) continue;
        obj += within_sums_[c] / (2.0 * s);
        if (beta != 0.0) obj += 0.5 * beta * (s - 1);
    }
    return obj;
}

}  // namespace rkm
