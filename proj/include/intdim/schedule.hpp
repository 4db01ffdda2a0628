#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "intdim/point_cloud.hpp"

namespace intdim {

// Smoothing-rate schedules r_n. Rate forms yield one radius for a given
// sample size n; the log-log grid yields m geometrically spaced radii.

/// r_n = (log n / n)^(1/d'), consistent for the volume and capacity estimators
/// when d' exceeds the ambient dimension.
struct VolumeRate {
  double d_prime = 0.0;
  std::optional<std::size_t> ambient_dim;  // enables the d' > d check
};

/// r_n = (log n / n)^(1 / ((1+beta) * dim_cd)), beta > 0. Needs a guess of the
/// correlation dimension itself.
struct CorrelationRate {
  double beta = 0.0;
  double dim_cd_guess = 0.0;
};

/// r_n = (C log n / n)^(1/d'), C > 28/(3 delta): pointwise consistency at one point.
struct PointwiseRate {
  double c = 0.0;
  double delta = 1.0;
  double d_prime = 0.0;
};

/// r_n = (beta log n / n)^(1/(2 d')), beta > (4d+12)/delta^2: uniform pointwise consistency.
struct UniformPointwiseRate {
  double beta = 0.0;
  double delta = 1.0;
  double d_prime = 0.0;
  std::optional<std::size_t> ambient_dim;  // enables the beta bound, which involves d
};

/// m radii geometrically spaced in [r_min, r_max], returned in decreasing order.
struct LogLogGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t m = 0;
};

using ScheduleProvenance =
    std::variant<VolumeRate, CorrelationRate, PointwiseRate, UniformPointwiseRate, LogLogGrid>;

struct ScaleSchedule {
  std::vector<double> radii;  // strictly decreasing
  ScheduleProvenance provenance;

  std::size_t size() const { return radii.size(); }
  /// Same radii in increasing order.
  std::vector<double> ascending() const { return {radii.rbegin(), radii.rend()}; }
};

std::string describe(const ScheduleProvenance& provenance);

/// Throws InputError naming the violated inequality when the parameters break
/// the rate's constraint.
ScaleSchedule make_schedule(const ScheduleProvenance& provenance, std::size_t n);

/// Wraps explicit radii (any order, duplicates rejected) as a decreasing schedule.
ScaleSchedule explicit_schedule(std::vector<double> radii);

/// Quantiles of the pairwise-distance distribution spanned by the default grid.
struct DefaultGridOptions {
  double lower_quantile = 0.001;
  double upper_quantile = 0.05;
  std::size_t m = 20;
  std::size_t subsample = 500;
};

/// Data-adaptive grid: m radii between two quantiles of the pairwise distances of
/// an evenly strided subsample of the cloud.
ScaleSchedule default_schedule(const PointCloud& cloud, const DefaultGridOptions& options = {});

/// Order statistic of sorted values at 1-based index ceil(q * n), q in (0, 1].
double quantile_order_statistic(std::vector<double> values, double q);

}  // namespace intdim
