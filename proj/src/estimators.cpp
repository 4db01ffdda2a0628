#include "intdim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "intdim/errors.hpp"
#include "intdim/parallel.hpp"

namespace intdim {
namespace {

void require_unit_radius(double r, const char* what) {
  if (!(r > 0.0 && r < 1.0)) {
    throw InputError(std::string(what) + " needs 0 < r < 1 (got r=" + std::to_string(r) + ")");
  }
}

// Schedule radii in increasing order.
std::vector<double> ascending_radii(const ScaleSchedule& schedule) {
  if (schedule.radii.empty()) throw InputError("schedule has no radii");
  auto asc = schedule.ascending();
  if (!(asc.front() > 0.0)) throw InputError("schedule radii must be positive");
  return asc;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::BoxCount: return "bc";
    case Method::Capacity: return "cap";
    case Method::Correlation: return "cd";
    case Method::Pointwise: return "pw";
    case Method::Volume: return "vol";
    case Method::PolyVolume: return "polyvol";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::BoxCount, Method::Capacity, Method::Correlation, Method::Pointwise,
                 Method::Volume, Method::PolyVolume}) {
    if (name == to_string(m)) return m;
  }
  throw InputError("unknown estimator '" + std::string(name) +
                   "' (expected bc, cap, cd, pw, vol or polyvol)");
}

int nearest_integer(double value) { return static_cast<int>(std::floor(value + 0.5)); }

DimensionEstimate DimensionEstimate::make(Method method, double value, std::vector<double> scales) {
  if (!std::isfinite(value)) throw EstimationError("estimate is not finite");
  DimensionEstimate e;
  e.method = method;
  e.value = value;
  e.rounded = nearest_integer(value);
  e.scales = std::move(scales);
  return e;
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InputError("regression needs at least 2 points");
  const double m = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw InputError("regression abscissae are all identical");

  SlopeFit fit;
  fit.points = points.size();
  if (syy == 0.0) {
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 1.0;
    fit.degenerate = true;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

DimensionEstimate ratio_or_slope(Method method, std::span<const double> radii,
                                 std::span<const double> masses) {
  std::vector<std::pair<double, double>> pts;
  std::vector<double> used;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (masses[k] > 0.0) {
      pts.emplace_back(std::log(radii[k]), std::log(masses[k]));
      used.push_back(radii[k]);
    }
  }
  if (pts.empty()) {
    throw EstimationError(method == Method::Correlation ? "no pairs at any scale"
                                                        : "empty ball at every scale");
  }
  const std::size_t dropped = radii.size() - pts.size();
  if (pts.size() == 1) {
    require_unit_radius(used.front(), "single-scale ratio estimate");
    auto e = DimensionEstimate::make(method, pts.front().second / pts.front().first, used);
    e.dropped_scales = dropped;
    return e;
  }
  const SlopeFit fit = loglog_slope(pts);
  auto e = DimensionEstimate::make(method, fit.slope, used);
  e.fit = fit;
  e.dropped_scales = dropped;
  return e;
}

DimensionEstimate est_capacity(const PointCloud& cloud, double r) {
  require_unit_radius(r, "capacity estimate");
  const auto count = static_cast<double>(cloud.greedy_separated(r).size());
  return DimensionEstimate::make(Method::Capacity, -std::log(count) / std::log(r), {r});
}

double capacity_two_scale_value(std::size_t count_r1, std::size_t count_r2, double r1,
                                double r2) {
  return (std::log(static_cast<double>(count_r2)) - std::log(static_cast<double>(count_r1))) /
         (std::log(r1) - std::log(r2));
}

DimensionEstimate est_capacity_two_scale(const PointCloud& cloud, double r1, double r2) {
  // a slope between two scales; unlike the ratio form it needs no r < 1
  if (!(r2 > 0.0)) throw InputError("two-scale capacity estimate needs r2 > 0");
  if (!(r2 < r1)) throw InputError("two-scale capacity estimate needs r2 < r1");
  const std::size_t n1 = cloud.greedy_separated(r1).size();
  const std::size_t n2 = cloud.greedy_separated(r2).size();
  return DimensionEstimate::make(Method::Capacity, capacity_two_scale_value(n1, n2, r1, r2),
                                 {r1, r2});
}

DimensionEstimate est_boxcount(const PointCloud& cloud, const ScaleSchedule& schedule) {
  if (schedule.size() < 2) throw InputError("box-counting regression needs at least 2 radii");
  std::vector<std::pair<double, double>> pts;
  for (double r : schedule.radii) {
    if (!(r > 0.0)) throw InputError("schedule radii must be positive");
    pts.emplace_back(-std::log(r), std::log(static_cast<double>(cloud.box_count(r))));
  }
  const SlopeFit fit = loglog_slope(pts);
  auto e = DimensionEstimate::make(Method::BoxCount, fit.slope, schedule.radii);
  e.fit = fit;
  return e;
}

double p_hat(const PointCloud& cloud, double r) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const double n = static_cast<double>(cloud.size());
  return static_cast<double>(cloud.count_pairs_within(r)) / (n * (n - 1.0) / 2.0);
}

DimensionEstimate est_correlation(const PointCloud& cloud, const ScaleSchedule& schedule) {
  if (cloud.size() < 2) throw InputError("correlation estimate needs at least 2 points");
  const auto asc = ascending_radii(schedule);
  const auto counts = cloud.count_pairs_within_radii(asc);
  const double n = static_cast<double>(cloud.size());
  const double total_pairs = n * (n - 1.0) / 2.0;
  // back to schedule (decreasing) order
  std::vector<double> masses(asc.size());
  for (std::size_t k = 0; k < asc.size(); ++k) {
    masses[asc.size() - 1 - k] = static_cast<double>(counts[k]) / total_pairs;
  }
  return ratio_or_slope(Method::Correlation, schedule.radii, masses);
}

DimensionEstimate est_pointwise_at(const PointCloud& cloud, std::span<const double> x,
                                   const ScaleSchedule& schedule) {
  const auto asc = ascending_radii(schedule);
  const auto counts = cloud.count_within_radii(x, asc, /*strict=*/false);
  const double n = static_cast<double>(cloud.size());
  std::vector<double> masses(asc.size());
  for (std::size_t k = 0; k < asc.size(); ++k) {
    masses[asc.size() - 1 - k] = static_cast<double>(counts[k]) / n;
  }
  return ratio_or_slope(Method::Pointwise, schedule.radii, masses);
}

std::vector<double> pointwise_values(const PointCloud& cloud, const ScaleSchedule& schedule,
                                     unsigned threads) {
  ascending_radii(schedule);  // validates
  std::vector<double> values(cloud.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(cloud.size(), threads, [&](std::size_t i) {
    try {
      values[i] = est_pointwise_at(cloud, cloud.point(i), schedule).value;
    } catch (const EstimationError&) {
      // left as NaN, counted as excluded by the caller
    }
  });
  return values;
}

DimensionEstimate est_pointwise_global(const PointCloud& cloud, const ScaleSchedule& schedule,
                                       double quantile, unsigned threads) {
  if (!(quantile > 0.0 && quantile <= 1.0)) throw InputError("quantile must lie in (0, 1]");
  const auto values = pointwise_values(cloud, schedule, threads);
  std::vector<double> ok;
  ok.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) ok.push_back(v);
  }
  const std::size_t excluded = values.size() - ok.size();
  if (ok.empty() || 10 * excluded > values.size()) {
    throw EstimationError("pointwise estimate failed at " + std::to_string(excluded) + " of " +
                          std::to_string(values.size()) + " points (limit 10%)");
  }
  auto e = DimensionEstimate::make(Method::Pointwise, quantile_order_statistic(std::move(ok), quantile),
                                   schedule.radii);
  e.excluded = excluded;
  return e;
}

}  // namespace intdim
