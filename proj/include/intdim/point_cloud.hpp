#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace intdim {

struct BoundingBox {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  double volume() const;
};

class KdTree;

/**
 * Immutable sample of n points in R^d, stored row-major.
 *
 * All distances are Euclidean and evaluated as sqrt(sum of squared coordinate
 * differences, summed in coordinate order). Every query answered through the
 * internal k-d tree returns exactly what a linear scan with that same distance
 * function would return; the tree only prunes subtrees whose bounding-box
 * distance bounds decide the comparison.
 *
 * Queries are const and may run concurrently.
 */
class PointCloud {
 public:
  /// `coords` holds n*dim values, point i at [i*dim, (i+1)*dim).
  PointCloud(std::vector<double> coords, std::size_t dim);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  PointCloud(const PointCloud&) = default;
  PointCloud(PointCloud&&) noexcept = default;
  PointCloud& operator=(const PointCloud&) = default;
  PointCloud& operator=(PointCloud&&) noexcept = default;
  ~PointCloud();

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  /// #{i : ||X_i - x|| <= r}, or < r when strict. The closed-ball default counts
  /// a sample point queried at itself.
  std::size_t count_within(std::span<const double> x, double r, bool strict = false) const;

  /// Counts at several radii in one traversal. `radii` must be ascending.
  std::vector<std::size_t> count_within_radii(std::span<const double> x,
                                              std::span<const double> radii,
                                              bool strict = false) const;

  /// #{(i, j), i < j : ||X_i - X_j|| < r}. Requires n >= 2.
  std::uint64_t count_pairs_within(double r) const;

  /// Pair counts with strict inequality at each of the ascending `radii`.
  std::vector<std::uint64_t> count_pairs_within_radii(std::span<const double> radii) const;

  /// Single index-order pass: X_i is accepted iff it lies at distance >= r from
  /// every previously accepted point. The result is a maximal r-separated subset.
  std::vector<std::size_t> greedy_separated(double r) const;

  /// Number of occupied cells of the side-r grid anchored at the coordinate-wise minimum.
  std::size_t box_count(double r) const;

  BoundingBox bounding_box(double margin = 0.0) const;

  /// Distance from x to its nearest sample point, or +inf when none is within `cap`.
  double nearest_distance(std::span<const double> x, double cap) const;

  /// Largest pairwise distance (exact, O(n^2)).
  double diameter() const;

 private:
  void check_query(std::span<const double> x) const;

  std::vector<double> coords_;
  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const KdTree> tree_;
};

/// Euclidean distance with the summation order every query in this library uses.
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace intdim
