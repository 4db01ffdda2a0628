#include "intdim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "intdim/errors.hpp"

namespace intdim {
namespace {

double log_ratio(std::size_t n) {
  if (n < 2) throw InputError("rate schedules need sample size n >= 2");
  const double dn = static_cast<double>(n);
  return std::log(dn) / dn;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string describe(const ScheduleProvenance& provenance) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const VolumeRate& p) { out << "volume_rate(d'=" << p.d_prime << ")"; },
                 [&](const CorrelationRate& p) {
                   out << "correlation_rate(beta=" << p.beta << ", dim_cd=" << p.dim_cd_guess
                       << ")";
                 },
                 [&](const PointwiseRate& p) {
                   out << "pointwise_rate(C=" << p.c << ", delta=" << p.delta
                       << ", d'=" << p.d_prime << ")";
                 },
                 [&](const UniformPointwiseRate& p) {
                   out << "uniform_pointwise_rate(beta=" << p.beta << ", delta=" << p.delta
                       << ", d'=" << p.d_prime << ")";
                 },
                 [&](const LogLogGrid& p) {
                   out << "loglog_grid(" << p.r_min << ", " << p.r_max << ", " << p.m << ")";
                 },
             },
             provenance);
  return out.str();
}

ScaleSchedule make_schedule(const ScheduleProvenance& provenance, std::size_t n) {
  auto single = [&](double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InputError("rate produced a non-positive radius");
    return ScaleSchedule{{r}, provenance};
  };
  return std::visit(
      Overloaded{
          [&](const VolumeRate& p) {
            if (!(p.d_prime > 0.0)) throw InputError("requires d' > 0");
            if (p.ambient_dim && !(p.d_prime > static_cast<double>(*p.ambient_dim))) {
              throw InputError("requires d' > d (d'=" + std::to_string(p.d_prime) +
                               ", d=" + std::to_string(*p.ambient_dim) + ")");
            }
            return single(std::pow(log_ratio(n), 1.0 / p.d_prime));
          },
          [&](const CorrelationRate& p) {
            if (!(p.beta > 0.0)) throw InputError("requires beta > 0");
            if (!(p.dim_cd_guess > 0.0)) throw InputError("requires dim_cd guess > 0");
            return single(std::pow(log_ratio(n), 1.0 / ((1.0 + p.beta) * p.dim_cd_guess)));
          },
          [&](const PointwiseRate& p) {
            if (!(p.delta > 0.0) || !(p.d_prime > 0.0)) {
              throw InputError("requires delta > 0 and d' > 0");
            }
            if (!(p.c > 28.0 / (3.0 * p.delta))) {
              throw InputError("requires C > 28/(3 delta) (C=" + std::to_string(p.c) +
                               ", bound=" + std::to_string(28.0 / (3.0 * p.delta)) + ")");
            }
            return single(std::pow(p.c * log_ratio(n), 1.0 / p.d_prime));
          },
          [&](const UniformPointwiseRate& p) {
            if (!(p.delta > 0.0) || !(p.d_prime > 0.0) || !(p.beta > 0.0)) {
              throw InputError("requires beta > 0, delta > 0 and d' > 0");
            }
            if (p.ambient_dim) {
              const double bound =
                  (4.0 * static_cast<double>(*p.ambient_dim) + 12.0) / (p.delta * p.delta);
              if (!(p.beta > bound)) {
                throw InputError("requires beta > (4d+12)/delta^2 (beta=" +
                                 std::to_string(p.beta) + ", bound=" + std::to_string(bound) +
                                 ")");
              }
            }
            return single(std::pow(p.beta * log_ratio(n), 1.0 / (2.0 * p.d_prime)));
          },
          [&](const LogLogGrid& p) {
            if (p.m < 1) throw InputError("log-log grid needs m >= 1");
            if (!(p.r_min > 0.0) || !(p.r_max >= p.r_min)) {
              throw InputError("log-log grid needs 0 < r_min <= r_max");
            }
            if (p.m > 1 && !(p.r_max > p.r_min)) {
              throw InputError("log-log grid with m >= 2 needs r_min < r_max");
            }
            ScaleSchedule s{{}, provenance};
            s.radii.reserve(p.m);
            // r_max * ratio^t rather than exp of interpolated logs: scaling the data by a
            // power of two then scales every radius exactly
            const double ratio = p.r_min / p.r_max;
            for (std::size_t i = 0; i < p.m; ++i) {
              if (i == 0) {
                s.radii.push_back(p.r_max);
              } else if (i + 1 == p.m) {
                s.radii.push_back(p.r_min);
              } else {
                const double t = static_cast<double>(i) / static_cast<double>(p.m - 1);
                s.radii.push_back(p.r_max * std::pow(ratio, t));
              }
            }
            return s;
          },
      },
      provenance);
}

ScaleSchedule explicit_schedule(std::vector<double> radii) {
  if (radii.empty()) throw InputError("schedule needs at least one radius");
  std::sort(radii.begin(), radii.end(), std::greater<>());
  if (std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
    throw InputError("schedule radii must be distinct");
  }
  if (!(radii.back() > 0.0)) throw InputError("schedule radii must be positive");
  LogLogGrid tag{radii.back(), radii.front(), radii.size()};
  return {std::move(radii), tag};
}

double quantile_order_statistic(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty set");
  if (!(q > 0.0 && q <= 1.0)) throw InputError("quantile must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // ceil(q n) with a relative guard so 0.9 * 2500 maps to 2250, not 2251
  auto k = static_cast<std::size_t>(std::ceil(q * n * (1.0 - 1e-12)));
  k = std::clamp<std::size_t>(k, 1, values.size());
  return values[k - 1];
}

ScaleSchedule default_schedule(const PointCloud& cloud, const DefaultGridOptions& options) {
  const std::size_t n = cloud.size();
  if (n < 2) throw InputError("default schedule needs at least 2 points");
  const std::size_t s = std::min(n, std::max<std::size_t>(options.subsample, 2));
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i * n / s;

  std::vector<double> dists;
  dists.reserve(s * (s - 1) / 2);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a + 1; b < s; ++b) {
      const double dist = distance(cloud.point(idx[a]), cloud.point(idx[b]));
      if (dist > 0.0) dists.push_back(dist);
    }
  }
  if (dists.empty()) throw InputError("default schedule: all sampled points coincide");
  const double r_min = quantile_order_statistic(dists, options.lower_quantile);
  const double r_max = quantile_order_statistic(dists, options.upper_quantile);
  if (!(r_max > r_min)) {
    throw InputError("default schedule: pairwise-distance quantiles coincide; pass radii");
  }
  return make_schedule(LogLogGrid{r_min, r_max, options.m}, n);
}

}  // namespace intdim
