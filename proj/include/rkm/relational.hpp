#pragma once

#include <span>
#include <vector>

#include "rkm/matrix.hpp"

namespace rkm {

/// Coefficient vector lambda with zero coordinate sum. Such a vector stands
/// for a difference of affine combinations of the data points, which is
/// exactly what makes -1/2 lambda' A lambda computable from A alone.
class CoefficientVector {
  public:
    /// Wraps a raw vector, checking that the coefficients sum to zero within
    /// 1e-12 times the sum of absolute values. Throws NonZeroSumError.
    explicit CoefficientVector(std::vector<double> coeffs);

    /// Coefficients of the virtual difference p_i - z_S: 1/|S| on the members
    /// of S and an additional -1 at position i. The intended values sum to
    /// zero exactly. Duplicate member indices are treated as a set.
    ///
    /// Throws EmptyClusterError, IndexOutOfRangeError.
    static CoefficientVector centroid(int i, const std::vector<int>& members, int n);

    int size() const { return static_cast<int>(coeffs_.size()); }
    std::span<const double> coeffs() const { return coeffs_; }
    double operator[](int j) const { return coeffs_[j]; }

    /// Sum of squared coefficients.
    double norm_sq() const;

  private:
    struct Trusted {};
    CoefficientVector(Trusted, std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    std::vector<double> coeffs_;
};

/// Squared length of the virtual point sum(lambda_j p_j), computed from the
/// dissimilarity matrix alone as -1/2 lambda' A lambda. May be negative when
/// A is not Euclidean. Throws LengthMismatchError.
double quadratic_form_distance(const SquaredDissimilarityMatrix& a, const CoefficientVector& lambda);

/// Squared norm of the centroid coefficient vector, by the closed form
/// 1 - 1/|S| when i is a member of S and 1 + 1/|S| otherwise.
double centroid_coefficient_norm_sq(bool member, int cluster_size);

/// Per-cluster statistics maintained incrementally so that a centroid
/// distance costs O(1) instead of the O(n^2) quadratic form:
///
///   d2(i, S) = (1/|S|) sum_{j in S} A_ij - W_S / (2 |S|^2),
///
/// where W_S is the within-cluster sum of A over S. The centroid itself is
/// never materialized. A cache is owned by a single solver run; concurrent
/// use is read-only.
class ClusterStatsCache {
  public:
    ClusterStatsCache(const SquaredDissimilarityMatrix& a, std::vector<int> labeling,
                      int num_clusters);

    /// Relabels point i into cluster `to`, updating sizes, the affected
    /// point-to-cluster sum columns and within-cluster sums in O(n). No-op
    /// when the point already lives there. Throws IndexOutOfRangeError.
    void move_point(int i, int to);

    /// Squared distance from point i to the (virtual) centroid of cluster c.
    /// Throws EmptyClusterError.
    double centroid_distance(int i, int c) const;

    /// Sum of centroid distances over all points, computed as
    /// sum_c W_c / (2 |c|) over nonempty clusters. With beta > 0 the value is
    /// reported under the beta-spread matrix without touching the stored
    /// sums: each cluster contributes an extra beta (|c| - 1) / 2.
    double total_objective(double beta = 0.0) const;

    int point_count() const { return n_; }
    int cluster_count() const { return num_clusters_; }
    int label(int i) const { return labeling_[i]; }
    const std::vector<int>& labeling() const { return labeling_; }
    int cluster_size(int c) const { return sizes_[c]; }

    /// sum_{j in c} A_ij
    double point_cluster_sum(int i, int c) const {
        return point_cluster_sums_[static_cast<std::size_t>(i) * num_clusters_ + c];
    }
    /// W_c = sum_{j,k in c} A_jk
    double within_sum(int c) const { return within_sums_[c]; }

    const SquaredDissimilarityMatrix& matrix() const { return *a_; }

  private:
    const SquaredDissimilarityMatrix* a_;
    int n_;
    int num_clusters_;
    std::vector<int> labeling_;
    std::vector<int> sizes_;
    std::vector<double> point_cluster_sums_;  // n x num_clusters, row-major
    std::vector<double> within_sums_;
};

}  // namespace rkm
