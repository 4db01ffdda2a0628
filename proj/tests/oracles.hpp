#pragma once

// Brute-force reference implementations and random instance generators shared by
// the unit tests and the acceptance binary. Nothing here touches the k-d tree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "intdim/point_cloud.hpp"

namespace oracle {

inline double dist(const intdim::PointCloud& c, std::size_t i, std::span<const double> x) {
  return intdim::distance(c.point(i), x);
}

inline std::size_t count_within(const intdim::PointCloud& c, std::span<const double> x, double r,
                                bool strict) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = dist(c, i, x);
    if (strict ? d < r : d <= r) ++k;
  }
  return k;
}

inline std::uint64_t count_pairs(const intdim::PointCloud& c, double r) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (intdim::distance(c.point(i), c.point(j)) < r) ++k;
    }
  }
  return k;
}

inline double p_hat(const intdim::PointCloud& c, double r) {
  const double n = static_cast<double>(c.size());
  return static_cast<double>(count_pairs(c, r)) / (n * (n - 1.0) / 2.0);
}

// Distinct grid cells floor((x - min) / r), collected in a set.
inline std::size_t box_count(const intdim::PointCloud& c, double r) {
  std::vector<double> lo(c.dim(), INFINITY);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.dim(); ++j) lo[j] = std::min(lo[j], c.point(i)[j]);
  }
  std::set<std::vector<std::int64_t>> cells;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::int64_t> cell(c.dim());
    for (std::size_t j = 0; j < c.dim(); ++j) {
      cell[j] = static_cast<std::int64_t>(std::floor((c.point(i)[j] - lo[j]) / r));
    }
    cells.insert(std::move(cell));
  }
  return cells.size();
}

inline std::vector<std::size_t> greedy_separated(const intdim::PointCloud& c, double r) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool ok = true;
    for (std::size_t k : kept) {
      if (intdim::distance(c.point(i), c.point(k)) < r) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return kept;
}

// Random cloud of varied texture: continuous, lattice (exact ties), or with
// duplicated points.
inline intdim::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_int_distribution<int> style(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(0, 4);
  const int s = style(rng);
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double& v = coords[i * d + j];
      if (s == 1) v = 0.25 * lattice(rng);
      else v = unit(rng) * 3.0 - 1.0;
    }
    if (s == 2 && i > 0 && unit(rng) < 0.3) {
      const std::size_t src = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
      std::copy_n(coords.begin() + static_cast<std::ptrdiff_t>(src * d), d,
                  coords.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
  }
  return intdim::PointCloud(std::move(coords), d);
}

// Radius that is sometimes an exact pairwise distance, to land on the boundary.
inline double random_radius(std::mt19937_64& rng, const intdim::PointCloud& c) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (c.size() >= 2 && unit(rng) < 0.5) {
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    const double d = intdim::distance(c.point(pick(rng)), c.point(pick(rng)));
    if (d > 0.0) return d;
  }
  return 0.02 + 1.5 * unit(rng);
}

}  // namespace oracle
