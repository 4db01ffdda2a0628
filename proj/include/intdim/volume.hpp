#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "intdim/estimators.hpp"
#include "intdim/point_cloud.hpp"

namespace intdim {

/// Lebesgue volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1), 1 <= d <= 25.
double unit_ball_volume(std::size_t d);

enum class VolumeMethod { MonteCarlo, Exact1d };

/// Volume of the r-parallel set of the sample, mu(B(sample, r)).
struct VolumeEstimate {
  double r = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  VolumeMethod method = VolumeMethod::MonteCarlo;
  std::size_t samples = 0;  // Monte-Carlo budget M (0 for exact)
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  std::size_t samples = 100000;  // M, at least 1000
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Exact measure of the union of intervals [X_i - r, X_i + r]; cloud must be 1-d.
VolumeEstimate exact_volume_1d(const PointCloud& cloud, double r);

/// Rejection sampling over the r-padded bounding box. Samples are drawn in fixed
/// chunks with per-chunk seeds, so the result does not depend on `threads`.
VolumeEstimate empirical_volume(const PointCloud& cloud, double r, const MonteCarloOptions& mc);

/// Volumes at several radii from one shared set of uniform points in the box
/// padded by the largest radius, so the profile is non-decreasing in r.
/// With `exact_in_1d`, one-dimensional clouds use the exact interval union.
std::vector<VolumeEstimate> volume_profile(const PointCloud& cloud, std::span<const double> radii,
                                           const MonteCarloOptions& mc, bool exact_in_1d = true);

void write_volume_profile_csv(std::ostream& out, std::span<const VolumeEstimate> profile);

/// d - log V / log r for a volume already measured.
DimensionEstimate volume_dimension(std::size_t ambient_dim, const VolumeEstimate& volume);

/// d - log V_n(r) / log r with a Monte-Carlo V_n; 0 < r < 1.
DimensionEstimate est_volume_dim(const PointCloud& cloud, double r, const MonteCarloOptions& mc);

struct Lemma1Report {
  double lhs = 0.0;        // |vol - cap + log(omega_d) / log r|
  double rhs = 0.0;        // -d log 2 / log r
  double mc_margin = 0.0;  // 3 standard errors of V_n pushed through the log
  bool holds = false;
  double volume_dim = 0.0;
  double capacity_dim = 0.0;
  std::size_t separated = 0;
  VolumeEstimate volume;
};

/// Evaluates the volume/capacity sandwich inequality at radius r in (0, 1).
/// One-dimensional clouds use the exact volume (zero margin) when `exact_in_1d`.
Lemma1Report lemma1_check(const PointCloud& cloud, double r, const MonteCarloOptions& mc,
                          bool exact_in_1d = true);

/// Least-squares polynomial sum_j coeffs[j] r^j fitted to a volume profile on [0, R].
struct VolumePolynomial {
  std::vector<double> coeffs;  // degree 0 .. d
  double fit_radius = 0.0;     // R
  std::size_t grid_size = 0;   // m
  double residual = 0.0;       // sqrt((R/m) sum_i (V_n(r_i) - P(r_i))^2)
  std::vector<VolumeEstimate> profile;

  double operator()(double r) const;
};

/// Least-squares polynomial of the given degree through (radii, values), solved by
/// column-pivoted QR of the Vandermonde matrix.
std::vector<double> fit_polynomial(std::span<const double> radii, std::span<const double> values,
                                   std::size_t degree);

/// Fits a degree-d polynomial to V_n on the grid {R i / m : i = 1..m}, m >= d + 2.
VolumePolynomial fit_volume_polynomial(const PointCloud& cloud, double fit_radius,
                                       std::size_t grid_size, const MonteCarloOptions& mc,
                                       bool exact_in_1d = true);

struct PolyVolumeEstimate {
  DimensionEstimate estimate;
  std::size_t leading_order = 0;  // first coefficient above 1e-3 * max |coeff|
  double condition_value = 0.0;   // |log(sum_j coeff_j r0^(j-k)) / log r0|
  bool condition_holds = false;   // condition_value < 1/4
};

/// f(d - log P(r0) / log r0); the rounded value is the verdict.
PolyVolumeEstimate est_polyvol_dim(const VolumePolynomial& poly, double r0, std::size_t ambient_dim);

}  // namespace intdim
