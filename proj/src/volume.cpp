#include "intdim/volume.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "intdim/csv_io.hpp"
#include "intdim/errors.hpp"
#include "intdim/parallel.hpp"
#include "intdim/rng.hpp"

namespace intdim {
namespace {

constexpr std::size_t kChunk = 8192;

void check_budget(const MonteCarloOptions& mc) {
  if (mc.samples < 1000) {
    throw InputError("Monte-Carlo budget M must be at least 1000 (got " +
                     std::to_string(mc.samples) + ")");
  }
}

// hits[k] = number of uniform box points within distance <= radii[k] of the sample;
// radii ascending.
std::vector<std::size_t> monte_carlo_hits(const PointCloud& cloud, const BoundingBox& box,
                                          std::span<const double> radii,
                                          const MonteCarloOptions& mc) {
  const std::size_t d = cloud.dim();
  const std::size_t chunks = (mc.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<std::size_t>> per_chunk(chunks, std::vector<std::size_t>(radii.size()));
  const double cap = radii.back();

  parallel_for(chunks, mc.threads, [&](std::size_t c) {
    Rng rng(derive_seed(mc.seed, c, "volume"));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t count = std::min(kChunk, mc.samples - c * kChunk);
    std::vector<double> x(d);
    auto& hits = per_chunk[c];
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = box.lower[j] + unit(rng) * (box.upper[j] - box.lower[j]);
      }
      const double nearest = cloud.nearest_distance(x, cap);
      if (std::isinf(nearest)) continue;
      const auto first = std::lower_bound(radii.begin(), radii.end(), nearest) - radii.begin();
      for (auto k = static_cast<std::size_t>(first); k < radii.size(); ++k) ++hits[k];
    }
  });

  std::vector<std::size_t> total(radii.size(), 0);
  for (const auto& hits : per_chunk) {
    for (std::size_t k = 0; k < radii.size(); ++k) total[k] += hits[k];
  }
  return total;
}

VolumeEstimate from_hits(double r, std::size_t hits, double box_volume,
                         const MonteCarloOptions& mc) {
  const double m = static_cast<double>(mc.samples);
  const double p = static_cast<double>(hits) / m;
  VolumeEstimate v;
  v.r = r;
  v.value = p * box_volume;
  v.std_error = std::sqrt(p * (1.0 - p) / m) * box_volume;
  v.method = VolumeMethod::MonteCarlo;
  v.samples = mc.samples;
  v.seed = mc.seed;
  return v;
}

}  // namespace

double unit_ball_volume(std::size_t d) {
  if (d < 1 || d > 25) {
    throw InputError("unit ball volume defined here for 1 <= d <= 25 (got " + std::to_string(d) +
                     ")");
  }
  const double half = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

VolumeEstimate exact_volume_1d(const PointCloud& cloud, double r) {
  if (cloud.dim() != 1) throw InputError("exact volume is only available for 1-d clouds");
  if (!(r > 0.0)) throw InputError("radius must be positive");
  std::vector<double> xs = cloud.coords();
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  double lo = xs.front() - r;
  double hi = xs.front() + r;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] - r <= hi) {
      hi = std::max(hi, xs[i] + r);
    } else {
      total += hi - lo;
      lo = xs[i] - r;
      hi = xs[i] + r;
    }
  }
  total += hi - lo;
  VolumeEstimate v;
  v.r = r;
  v.value = total;
  v.method = VolumeMethod::Exact1d;
  return v;
}

VolumeEstimate empirical_volume(const PointCloud& cloud, double r, const MonteCarloOptions& mc) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  check_budget(mc);
  const BoundingBox box = cloud.bounding_box(r);
  const double radii[] = {r};
  return from_hits(r, monte_carlo_hits(cloud, box, radii, mc).front(), box.volume(), mc);
}

std::vector<VolumeEstimate> volume_profile(const PointCloud& cloud, std::span<const double> radii,
                                           const MonteCarloOptions& mc, bool exact_in_1d) {
  if (radii.empty()) return {};
  std::vector<double> asc(radii.begin(), radii.end());
  std::sort(asc.begin(), asc.end());
  if (!(asc.front() > 0.0)) throw InputError("radii must be positive");

  std::vector<VolumeEstimate> by_radius(asc.size());
  if (exact_in_1d && cloud.dim() == 1) {
    for (std::size_t k = 0; k < asc.size(); ++k) by_radius[k] = exact_volume_1d(cloud, asc[k]);
  } else {
    check_budget(mc);
    const BoundingBox box = cloud.bounding_box(asc.back());
    const auto hits = monte_carlo_hits(cloud, box, asc, mc);
    for (std::size_t k = 0; k < asc.size(); ++k) {
      by_radius[k] = from_hits(asc[k], hits[k], box.volume(), mc);
    }
  }
  // caller's order
  std::vector<VolumeEstimate> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const auto k = std::lower_bound(asc.begin(), asc.end(), r) - asc.begin();
    out.push_back(by_radius[static_cast<std::size_t>(k)]);
  }
  return out;
}

void write_volume_profile_csv(std::ostream& out, std::span<const VolumeEstimate> profile) {
  out << "r,V_n,std_error\n";
  for (const auto& v : profile) {
    out << format_double(v.r) << ',' << format_double(v.value) << ','
        << format_double(v.std_error) << '\n';
  }
}

DimensionEstimate volume_dimension(std::size_t ambient_dim, const VolumeEstimate& volume) {
  const double r = volume.r;
  if (!(r > 0.0 && r < 1.0)) throw InputError("volume estimate needs 0 < r < 1");
  if (!(volume.value > 0.0)) {
    throw EstimationError("no Monte-Carlo hits in the dilated sample; increase M or r");
  }
  return DimensionEstimate::make(
      Method::Volume, static_cast<double>(ambient_dim) - std::log(volume.value) / std::log(r),
      {r});
}

DimensionEstimate est_volume_dim(const PointCloud& cloud, double r, const MonteCarloOptions& mc) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("volume estimate needs 0 < r < 1");
  return volume_dimension(cloud.dim(), empirical_volume(cloud, r, mc));
}

Lemma1Report lemma1_check(const PointCloud& cloud, double r, const MonteCarloOptions& mc,
                          bool exact_in_1d) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("sandwich check needs 0 < r < 1");
  const std::size_t d = cloud.dim();
  Lemma1Report rep;
  rep.volume = (exact_in_1d && d == 1) ? exact_volume_1d(cloud, r) : empirical_volume(cloud, r, mc);
  const auto vol = volume_dimension(d, rep.volume);
  const auto cap = est_capacity(cloud, r);
  rep.volume_dim = vol.value;
  rep.capacity_dim = cap.value;
  rep.separated = cloud.greedy_separated(r).size();

  const double log_r = std::log(r);
  rep.lhs = std::abs(vol.value - cap.value + std::log(unit_ball_volume(d)) / log_r);
  rep.rhs = -static_cast<double>(d) * std::log(2.0) / log_r;

  if (rep.volume.method == VolumeMethod::MonteCarlo) {
    const double v = rep.volume.value;
    const double spread = 3.0 * rep.volume.std_error;
    const double up = std::log(v + spread) - std::log(v);
    const double down = v > spread ? std::log(v) - std::log(v - spread)
                                   : std::numeric_limits<double>::infinity();
    rep.mc_margin = std::max(up, down) / std::abs(log_r);
  }
  rep.holds = rep.lhs <= rep.rhs + rep.mc_margin;
  return rep;
}

double VolumePolynomial::operator()(double r) const {
  double acc = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * r + coeffs[j];
  return acc;
}

std::vector<double> fit_polynomial(std::span<const double> radii, std::span<const double> values,
                                   std::size_t degree) {
  if (radii.size() != values.size()) throw InputError("radii and values differ in length");
  std::vector<double> distinct(radii.begin(), radii.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < degree + 1) {
    throw InputError("polynomial fit of degree " + std::to_string(degree) + " needs at least " +
                     std::to_string(degree + 1) + " distinct radii");
  }
  const auto rows = static_cast<Eigen::Index>(radii.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double p = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      a(i, j) = p;
      p *= radii[static_cast<std::size_t>(i)];
    }
    b(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd theta = a.colPivHouseholderQr().solve(b);
  return {theta.data(), theta.data() + theta.size()};
}

VolumePolynomial fit_volume_polynomial(const PointCloud& cloud, double fit_radius,
                                       std::size_t grid_size, const MonteCarloOptions& mc,
                                       bool exact_in_1d) {
  if (!(fit_radius > 0.0)) throw InputError("fit interval radius R must be positive");
  const std::size_t d = cloud.dim();
  if (grid_size < d + 2) {
    throw InputError("volume polynomial fit needs m >= d + 2 grid points (got m=" +
                     std::to_string(grid_size) + ", d=" + std::to_string(d) + ")");
  }
  std::vector<double> radii(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    radii[i] = fit_radius * static_cast<double>(i + 1) / static_cast<double>(grid_size);
  }
  VolumePolynomial poly;
  poly.fit_radius = fit_radius;
  poly.grid_size = grid_size;
  poly.profile = volume_profile(cloud, radii, mc, exact_in_1d);
  std::vector<double> values(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) values[i] = poly.profile[i].value;
  poly.coeffs = fit_polynomial(radii, values, d);

  double sq = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double e = values[i] - poly(radii[i]);
    sq += e * e;
  }
  poly.residual = std::sqrt(sq * fit_radius / static_cast<double>(grid_size));
  return poly;
}

PolyVolumeEstimate est_polyvol_dim(const VolumePolynomial& poly, double r0,
                                   std::size_t ambient_dim) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw InputError("polynomial-volume estimate needs 0 < r0 < 1");
  if (poly.fit_radius > 0.0 && r0 > poly.fit_radius) {
    throw InputError("r0 must not exceed the fit interval radius R");
  }
  const double p = poly(r0);
  if (!(p > 0.0)) throw EstimationError("fit not positive at r0; decrease r0 or refit");
  const double log_r0 = std::log(r0);

  PolyVolumeEstimate out;
  out.estimate = DimensionEstimate::make(
      Method::PolyVolume, static_cast<double>(ambient_dim) - std::log(p) / log_r0, {r0});

  double largest = 0.0;
  for (double c : poly.coeffs) largest = std::max(largest, std::abs(c));
  std::size_t k = 0;
  while (k < poly.coeffs.size() && std::abs(poly.coeffs[k]) <= 1e-3 * largest) ++k;
  out.leading_order = k;
  double tail = 0.0;
  for (std::size_t j = poly.coeffs.size(); j-- > k;) tail = tail * r0 + poly.coeffs[j];
  out.condition_value = tail > 0.0 ? std::abs(std::log(tail) / log_r0)
                                   : std::numeric_limits<double>::infinity();
  out.condition_holds = out.condition_value < 0.25;
  return out;
}

}  // namespace intdim
