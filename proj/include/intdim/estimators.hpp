#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "intdim/point_cloud.hpp"
#include "intdim/schedule.hpp"

namespace intdim {

enum class Method { BoxCount, Capacity, Correlation, Pointwise, Volume, PolyVolume };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Nearest-integer map floor(x + 1/2).
int nearest_integer(double value);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
  bool degenerate = false;  // every ordinate equal
};

struct DimensionEstimate {
  Method method = Method::Pointwise;
  double value = 0.0;
  int rounded = 0;
  std::vector<double> scales;  // radii actually used
  std::optional<SlopeFit> fit;
  std::size_t excluded = 0;     // pointwise-global: points whose estimate failed
  std::size_t dropped_scales = 0;  // radii discarded because the count was zero

  static DimensionEstimate make(Method method, double value, std::vector<double> scales);
};

/// Ordinary least squares of y on x. Needs >= 2 points and at least two distinct
/// abscissae; a constant ordinate gives slope 0 with degenerate = true.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

/// -log N_sep(r) / log r with N_sep from the greedy separated subset; 0 < r < 1.
DimensionEstimate est_capacity(const PointCloud& cloud, double r);

/// (log N(r2) - log N(r1)) / (log r1 - log r2), 0 < r2 < r1.
DimensionEstimate est_capacity_two_scale(const PointCloud& cloud, double r1, double r2);

/// Two-scale form from separated-set counts already computed.
double capacity_two_scale_value(std::size_t count_r1, std::size_t count_r2, double r1, double r2);

/// Slope of log N_box(r) against log(1/r) over the schedule (m >= 2).
DimensionEstimate est_boxcount(const PointCloud& cloud, const ScaleSchedule& schedule);

/// Fraction of unordered pairs at distance < r.
double p_hat(const PointCloud& cloud, double r);

/// One radius: log p(r) / log r. Several: slope of log p on log r. Radii where
/// p = 0 are dropped.
DimensionEstimate est_correlation(const PointCloud& cloud, const ScaleSchedule& schedule);

/// Same as est_correlation but for the ball mass P_n(B(x, r)) (closed ball).
DimensionEstimate est_pointwise_at(const PointCloud& cloud, std::span<const double> x,
                                   const ScaleSchedule& schedule);

/// Pointwise estimate at every sample point (which counts itself), summarized by
/// the order statistic ceil(q n). Fails only if more than 10% of points fail.
DimensionEstimate est_pointwise_global(const PointCloud& cloud, const ScaleSchedule& schedule,
                                       double quantile = 0.9, unsigned threads = 1);

/// Per-point pointwise estimates (NaN where the estimate failed), in sample order.
std::vector<double> pointwise_values(const PointCloud& cloud, const ScaleSchedule& schedule,
                                     unsigned threads = 1);

/// Ratio (one scale) or log-log slope (several) of masses already counted at the
/// schedule radii; masses in the same order as schedule.radii. Zero masses are dropped.
DimensionEstimate ratio_or_slope(Method method, std::span<const double> radii,
                                 std::span<const double> masses);

}  // namespace intdim
