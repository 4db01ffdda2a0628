#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intdim/estimators.hpp"
#include "intdim/generators.hpp"
#include "intdim/schedule.hpp"

namespace intdim {

/**
 * One cell of a replicate study: B samples of size n from a generator, optional
 * Gaussian noise, and a set of estimators scored against the generator's
 * intrinsic dimension.
 *
 * Scales default to the data-adaptive grid of each replicate. `schedules` pins
 * them per estimator instead:
 *  - bc, cd, pw use the radii as given;
 *  - cap uses the largest and smallest radius (two-scale form), or the single
 *    radius (ratio form);
 *  - vol uses the smallest radius (also the default: the grid's smallest).
 * polyvol takes its fit interval and evaluation radius from `poly_fit_radius` and
 * `poly_r0`, defaulting to 10% and 1% of the sample diameter.
 */
struct ExperimentSpec {
  GeneratorSpec generator;
  NoiseSpec noise;
  std::size_t n = 2500;
  std::size_t replicates = 20;
  std::vector<Method> estimators{Method::BoxCount, Method::Capacity, Method::Correlation,
                                 Method::Pointwise};
  std::uint64_t master_seed = 1;

  DefaultGridOptions grid;
  std::map<Method, ScaleSchedule> schedules;
  double pw_quantile = 0.9;
  std::size_t mc_samples = 100000;
  std::size_t poly_grid = 20;
  std::optional<double> poly_fit_radius;
  std::optional<double> poly_r0;

  unsigned threads = 1;
  bool record_timing = false;  // wall-clock seconds make raw output non-reproducible

  void validate() const;
};

struct ReplicateRecord {
  std::size_t replicate = 0;  // 1-based
  std::optional<double> value;
  int rounded = 0;
  double seconds = 0.0;
  std::string error;
};

struct EstimatorSummary {
  Method method = Method::Pointwise;
  std::vector<ReplicateRecord> records;
  std::size_t successes = 0;
  std::size_t failures = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation; 0 for a single success
  double proportion_correct = 0.0;
  double seconds = 0.0;
  bool failed = false;  // more than 20% of replicates failed
};

/// Aggregates replicate records in replicate order. Pure function of its inputs,
/// so persisted raw values reproduce the aggregate exactly.
EstimatorSummary summarize(Method method, std::vector<ReplicateRecord> records,
                           std::size_t true_dim);

struct ExperimentResult {
  GeneratorSpec generator;
  double sigma = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  bool timed = false;
  std::vector<EstimatorSummary> estimators;

  const EstimatorSummary& at(Method method) const;
};

/// Seeds for replicate b are derived from (master_seed, b, stage) only, so the
/// result is identical for any thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One result per sigma, in input order. All sigmas share the master seed, so the
/// noiseless and noisy runs perturb the same base clouds.
std::vector<ExperimentResult> noise_sweep(const ExperimentSpec& spec,
                                          const std::vector<double>& sigmas);

/// Hypercube grid: hypercubes for every d in `ambient_dims` and intrinsic dimension d
/// down to 2 (d = 1 gives one row with k = 1).
std::vector<ExperimentSpec> table1_specs(const ExperimentSpec& base,
                                         const std::vector<std::size_t>& ambient_dims);

/// Generators standing in for the manifold benchmark entries this library can
/// build: M1 (sphere, d=11), M2 (affine, d=5, k=3), M5 (helix), M7 (swiss roll),
/// M9 (affine, d=20, k=20).
GeneratorSpec manifold_generator(const std::string& name);
std::vector<std::string> manifold_names();

struct CdInvarianceReport {
  std::size_t n = 0;
  std::size_t replicates = 0;
  double scale = 1.0;
  std::vector<std::optional<double>> uniform_values;
  std::vector<std::optional<double>> triangular_values;
  double uniform_pass_rate = 0.0;     // fraction of replicates rounding to 2
  double triangular_pass_rate = 0.0;
  bool passes = false;                // both rates >= 0.9
  bool reliable = false;              // n >= 500
};

/// Correlation-dimension estimates on [0,1]^2 under the uniform law and under
/// independent coordinates with density 2x, optionally scaled by `scale`.
CdInvarianceReport cd_invariance_check(std::size_t n, std::size_t replicates, std::uint64_t seed,
                                       double scale = 1.0, unsigned threads = 1);

// Persistence.

/// Columns: experiment,replicate,estimator,value,rounded,seconds. `experiment` is
/// the index of the result in `results` (the row of the aggregate JSON). Seconds
/// stay empty unless timing was recorded; failed replicates leave value and
/// rounded empty.
void write_raw_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

struct RawRow {
  std::size_t experiment = 0;
  Method method = Method::Pointwise;
  ReplicateRecord record;
};

std::vector<RawRow> read_raw_csv(std::istream& in);

std::string aggregate_json(const std::vector<ExperimentResult>& results);

/// Columns x,y,series; x is the true dimension (by_sigma = false) or sigma.
void write_plot_csv(std::ostream& out, const std::vector<ExperimentResult>& results,
                    bool by_sigma);

}  // namespace intdim
