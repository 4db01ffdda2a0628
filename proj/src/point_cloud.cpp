#include "intdim/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "intdim/errors.hpp"

namespace intdim {

double BoundingBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

// Bucketed k-d tree holding point indices; the cloud owns the coordinates.
// Node boxes are the tight bounding boxes of their points. Box distance bounds
// use the same per-coordinate summation order as `distance`, so for every point
// p in a node lower_bound(x) <= distance(x, p) <= upper_bound(x) holds exactly in
// floating point (rounding is monotone).
class KdTree {
 public:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::int64_t left = -1;
    std::int64_t right = -1;
  };

  // Only reads `coords` during construction; the tree never refers to it afterwards.
  KdTree(const std::vector<double>& coords, std::size_t dim) : dim_(dim) {
    const std::size_t n = coords.size() / dim;
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(2 * n / kLeafSize + 2);
    build(coords, 0, n);
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& order() const { return order_; }

  std::span<const double> lo(std::size_t node) const { return {lo_.data() + node * dim_, dim_}; }
  std::span<const double> hi(std::size_t node) const { return {hi_.data() + node * dim_, dim_}; }

  double lower_bound(std::size_t node, std::span<const double> x) const {
    const auto l = lo(node);
    const auto h = hi(node);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double g = 0.0;
      if (x[i] < l[i]) {
        g = l[i] - x[i];
      } else if (x[i] > h[i]) {
        g = x[i] - h[i];
      }
      s += g * g;
    }
    return std::sqrt(s);
  }

  double upper_bound(std::size_t node, std::span<const double> x) const {
    const auto l = lo(node);
    const auto h = hi(node);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double g = std::max(std::abs(x[i] - l[i]), std::abs(h[i] - x[i]));
      s += g * g;
    }
    return std::sqrt(s);
  }

 private:
  static constexpr std::size_t kLeafSize = 12;

  std::size_t build(const std::vector<double>& coords, std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end, -1, -1});
    lo_.resize((id + 1) * dim_, std::numeric_limits<double>::infinity());
    hi_.resize((id + 1) * dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t k = begin; k < end; ++k) {
      const double* p = coords.data() + order_[k] * dim_;
      for (std::size_t i = 0; i < dim_; ++i) {
        lo_[id * dim_ + i] = std::min(lo_[id * dim_ + i], p[i]);
        hi_[id * dim_ + i] = std::max(hi_[id * dim_ + i], p[i]);
      }
    }
    if (end - begin <= kLeafSize) return id;

    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double w = hi_[id * dim_ + i] - lo_[id * dim_ + i];
      if (w > widest) {
        widest = w;
        axis = i;
      }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       const double ca = coords[a * dim_ + axis];
                       const double cb = coords[b * dim_ + axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const std::size_t left = build(coords, begin, mid);
    const std::size_t right = build(coords, mid, end);
    nodes_[id].left = static_cast<std::int64_t>(left);
    nodes_[id].right = static_cast<std::int64_t>(right);
    return id;
  }

  std::size_t dim_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

namespace {

// Index of the first radius that admits a point at distance `dist`.
std::size_t radius_bin(std::span<const double> radii, double dist, bool strict) {
  const auto it = strict ? std::upper_bound(radii.begin(), radii.end(), dist)
                         : std::lower_bound(radii.begin(), radii.end(), dist);
  return static_cast<std::size_t>(it - radii.begin());
}

}  // namespace

PointCloud::PointCloud(std::vector<double> coords, std::size_t dim)
    : coords_(std::move(coords)), dim_(dim) {
  if (dim_ == 0) throw InputError("ambient dimension must be positive");
  if (coords_.empty()) throw InputError("point cloud must contain at least one point");
  if (coords_.size() % dim_ != 0) {
    throw InputError("coordinate count " + std::to_string(coords_.size()) +
                     " is not a multiple of dimension " + std::to_string(dim_));
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw InputError("point coordinates must be finite");
  }
  size_ = coords_.size() / dim_;
  tree_ = std::make_shared<const KdTree>(coords_, dim_);
}

PointCloud::~PointCloud() = default;

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("point cloud must contain at least one point");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InputError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " coordinates, expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointCloud(std::move(coords), dim);
}

void PointCloud::check_query(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw InputError("query point has dimension " + std::to_string(x.size()) +
                     ", cloud has dimension " + std::to_string(dim_));
  }
}

std::size_t PointCloud::count_within(std::span<const double> x, double r, bool strict) const {
  const double radii[] = {r};
  return count_within_radii(x, radii, strict).front();
}

std::vector<std::size_t> PointCloud::count_within_radii(std::span<const double> x,
                                                        std::span<const double> radii,
                                                        bool strict) const {
  check_query(x);
  if (radii.empty()) return {};
  if (!(radii.front() > 0.0)) throw InputError("radius must be positive");
  if (!std::is_sorted(radii.begin(), radii.end())) throw InputError("radii must be ascending");

  const std::size_t m = radii.size();
  const double r_max = radii.back();
  std::vector<std::size_t> bins(m + 1, 0);

  const auto& nodes = tree_->nodes();
  const auto& order = tree_->order();
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const double lb = tree_->lower_bound(id, x);
    if (strict ? lb >= r_max : lb > r_max) continue;
    const auto& node = nodes[id];
    const std::size_t lb_bin = radius_bin(radii, lb, strict);
    if (lb_bin == radius_bin(radii, tree_->upper_bound(id, x), strict)) {
      bins[lb_bin] += node.end - node.begin;
      continue;
    }
    if (node.left < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        bins[radius_bin(radii, distance(x, point(order[k])), strict)] += 1;
      }
      continue;
    }
    stack.push_back(static_cast<std::size_t>(node.right));
    stack.push_back(static_cast<std::size_t>(node.left));
  }

  std::vector<std::size_t> counts(m);
  std::size_t running = 0;
  for (std::size_t k = 0; k < m; ++k) {
    running += bins[k];
    counts[k] = running;
  }
  return counts;
}

std::uint64_t PointCloud::count_pairs_within(double r) const {
  const double radii[] = {r};
  return count_pairs_within_radii(radii).front();
}

std::vector<std::uint64_t> PointCloud::count_pairs_within_radii(
    std::span<const double> radii) const {
  if (size_ < 2) throw InputError("pair counts need at least 2 points");
  std::vector<std::uint64_t> total(radii.size(), 0);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto counts = count_within_radii(point(i), radii, /*strict=*/true);
    for (std::size_t k = 0; k < radii.size(); ++k) total[k] += counts[k];
  }
  // Each point counts itself once (0 < r) and every qualifying pair twice.
  for (auto& t : total) t = (t - size_) / 2;
  return total;
}

std::vector<std::size_t> PointCloud::greedy_separated(double r) const {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  std::vector<std::size_t> accepted;
  for (std::size_t i = 0; i < size_; ++i) {
    const auto p = point(i);
    const bool separated = std::none_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
      return distance(p, point(a)) < r;
    });
    if (separated) accepted.push_back(i);
  }
  return accepted;
}

std::size_t PointCloud::box_count(double r) const {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const BoundingBox box = bounding_box();
  std::vector<std::int64_t> cells(size_ * dim_);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto p = point(i);
    for (std::size_t j = 0; j < dim_; ++j) {
      cells[i * dim_ + j] = static_cast<std::int64_t>(std::floor((p[j] - box.lower[j]) / r));
    }
  }
  std::vector<std::size_t> idx(size_);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(cells.begin() + static_cast<std::ptrdiff_t>(a * dim_),
                                        cells.begin() + static_cast<std::ptrdiff_t>((a + 1) * dim_),
                                        cells.begin() + static_cast<std::ptrdiff_t>(b * dim_),
                                        cells.begin() + static_cast<std::ptrdiff_t>((b + 1) * dim_));
  };
  std::sort(idx.begin(), idx.end(), row_less);
  std::size_t distinct = 1;
  for (std::size_t k = 1; k < size_; ++k) {
    if (row_less(idx[k - 1], idx[k])) ++distinct;
  }
  return distinct;
}

BoundingBox PointCloud::bounding_box(double margin) const {
  if (margin < 0.0) throw InputError("bounding box margin must be nonnegative");
  BoundingBox box{std::vector<double>(point(0).begin(), point(0).end()),
                  std::vector<double>(point(0).begin(), point(0).end())};
  for (std::size_t i = 1; i < size_; ++i) {
    const auto p = point(i);
    for (std::size_t j = 0; j < dim_; ++j) {
      box.lower[j] = std::min(box.lower[j], p[j]);
      box.upper[j] = std::max(box.upper[j], p[j]);
    }
  }
  for (std::size_t j = 0; j < dim_; ++j) {
    box.lower[j] -= margin;
    box.upper[j] += margin;
  }
  return box;
}

double PointCloud::nearest_distance(std::span<const double> x, double cap) const {
  check_query(x);
  double best = std::numeric_limits<double>::infinity();
  const auto& nodes = tree_->nodes();
  const auto& order = tree_->order();
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const double lb = tree_->lower_bound(id, x);
    if (lb > cap || lb >= best) continue;
    const auto& node = nodes[id];
    if (node.left < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        const double dist = distance(x, point(order[k]));
        if (dist <= cap && dist < best) best = dist;
      }
      continue;
    }
    const auto left = static_cast<std::size_t>(node.left);
    const auto right = static_cast<std::size_t>(node.right);
    // visit the nearer child first
    if (tree_->lower_bound(left, x) <= tree_->lower_bound(right, x)) {
      stack.push_back(right);
      stack.push_back(left);
    } else {
      stack.push_back(left);
      stack.push_back(right);
    }
  }
  return best;
}

double PointCloud::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = i + 1; j < size_; ++j) best = std::max(best, distance(point(i), point(j)));
  }
  return best;
}

}  // namespace intdim
