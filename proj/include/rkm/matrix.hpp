#pragma once

#include <optional>
#include <span>
#include <vector>

namespace rkm {

class SquaredDissimilarityMatrix;

SquaredDissimilarityMatrix apply_beta_spread(const SquaredDissimilarityMatrix& a, double beta);

/// Validated symmetric n-by-n matrix of squared dissimilarities with a zero
/// diagonal. In the Euclidean case entry (i,j) is the squared distance
/// between points i and j; in general it may be an arbitrary symmetric
/// dissimilarity, including negative values (flagged, not rejected).
///
/// Instances are immutable after construction and safe to share across
/// concurrent readers.
class SquaredDissimilarityMatrix {
  public:
    /// Validates a raw square grid.
    ///
    /// Asymmetry within `tolerance` is repaired by averaging (A+At)/2;
    /// diagonal noise within `tolerance` is forced to exact zero. Beyond the
    /// tolerance both are errors. The default tolerance is 1e-9 times the
    /// largest absolute entry. Validation is idempotent: a grid that already
    /// satisfies the invariants comes back bit-identical.
    ///
    /// Throws NonFiniteError, NonSquareError, EmptyInputError,
    /// AsymmetryError, NonzeroDiagonalError.
    static SquaredDissimilarityMatrix validate(const std::vector<std::vector<double>>& raw,
                                               std::optional<double> tolerance = std::nullopt);

    /// Builds the squared Euclidean distance matrix of a point set. All
    /// invariants hold by construction and has_negative_entries() is false.
    ///
    /// Throws EmptyInputError, DimensionMismatchError, NonFiniteError.
    static SquaredDissimilarityMatrix from_points(const std::vector<std::vector<double>>& points);

    int size() const { return n_; }

    double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }

    std::span<const double> row(int i) const {
        return {entries_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }

    /// Flat row-major entries.
    const std::vector<double>& entries() const { return entries_; }

    /// Largest absolute entry; zero only for the all-zero matrix. Relative
    /// tolerances throughout the library are expressed against this.
    double scale() const { return scale_; }

    bool has_negative_entries() const { return has_negative_; }

  private:
    SquaredDissimilarityMatrix(int n, std::vector<double> entries, double scale, bool has_negative)
        : n_(n), entries_(std::move(entries)), scale_(scale), has_negative_(has_negative) {}

    friend SquaredDissimilarityMatrix apply_beta_spread(const SquaredDissimilarityMatrix&, double);

    int n_;
    std::vector<double> entries_;
    double scale_;
    bool has_negative_;
};

/// Sum of squared coordinate differences, accumulated in index order. Shared
/// between from_points and the vector-space reference so that both see
/// bit-identical values.
double squared_euclidean(std::span<const double> a, std::span<const double> b);

}  // namespace rkm
