#include "intdim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "intdim/csv_io.hpp"
#include "intdim/errors.hpp"
#include "intdim/parallel.hpp"
#include "intdim/rng.hpp"
#include "intdim/volume.hpp"

namespace intdim {
namespace {

using Clock = std::chrono::steady_clock;

double estimate_once(const ExperimentSpec& spec, Method method, const PointCloud& cloud,
                     const ScaleSchedule& schedule, std::uint64_t mc_seed) {
  switch (method) {
    case Method::BoxCount:
      return est_boxcount(cloud, schedule).value;
    case Method::Correlation:
      return est_correlation(cloud, schedule).value;
    case Method::Pointwise:
      return est_pointwise_global(cloud, schedule, spec.pw_quantile).value;
    case Method::Capacity:
      if (schedule.size() == 1) return est_capacity(cloud, schedule.radii.front()).value;
      return est_capacity_two_scale(cloud, schedule.radii.front(), schedule.radii.back()).value;
    case Method::Volume:
      return est_volume_dim(cloud, schedule.radii.back(), {spec.mc_samples, mc_seed, 1}).value;
    case Method::PolyVolume: {
      const double diameter = cloud.diameter();
      const double fit_radius = spec.poly_fit_radius.value_or(0.1 * diameter);
      const double r0 = spec.poly_r0.value_or(0.01 * diameter);
      const auto poly =
          fit_volume_polynomial(cloud, fit_radius, std::max(spec.poly_grid, cloud.dim() + 2),
                                {spec.mc_samples, mc_seed, 1});
      return est_polyvol_dim(poly, r0, cloud.dim()).estimate.value;
    }
  }
  throw InputError("unknown estimator");
}

// One replicate: records in the order of spec.estimators.
std::vector<ReplicateRecord> run_replicate(const ExperimentSpec& spec, std::size_t b) {
  GeneratorSpec gen = spec.generator;
  gen.seed = derive_seed(spec.master_seed, b, "sample");
  const PointCloud cloud =
      add_noise(sample(gen, spec.n), spec.noise, derive_seed(spec.master_seed, b, "noise"));
  const std::uint64_t mc_seed = derive_seed(spec.master_seed, b, "volume");

  std::optional<ScaleSchedule> adaptive;
  std::string adaptive_error;
  auto schedule_for = [&](Method m) -> const ScaleSchedule& {
    if (auto it = spec.schedules.find(m); it != spec.schedules.end()) return it->second;
    if (!adaptive && adaptive_error.empty()) {
      try {
        adaptive = default_schedule(cloud, spec.grid);
      } catch (const std::exception& e) {
        adaptive_error = e.what();
      }
    }
    if (!adaptive) throw EstimationError(adaptive_error);
    return *adaptive;
  };

  std::vector<ReplicateRecord> out;
  out.reserve(spec.estimators.size());
  for (Method m : spec.estimators) {
    ReplicateRecord rec;
    rec.replicate = b + 1;
    const auto start = Clock::now();
    try {
      const ScaleSchedule& schedule =
          m == Method::PolyVolume ? ScaleSchedule{{1.0}, LogLogGrid{}} : schedule_for(m);
      const double v = estimate_once(spec, m, cloud, schedule, mc_seed);
      rec.value = v;
      rec.rounded = nearest_integer(v);
    } catch (const std::exception& e) {  // InputError or EstimationError on this sample
      rec.error = e.what();
    }
    if (spec.record_timing) {
      rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::optional<double> parse_optional_double(const std::string& field) {
  if (field.empty()) return std::nullopt;
  std::size_t pos = 0;
  const double v = std::stod(field, &pos);
  if (pos != field.size()) throw InputError("malformed number '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string series_label(const ExperimentResult& r, Method m, bool by_sigma) {
  std::string label(to_string(m));
  label += "_d" + std::to_string(r.generator.ambient_dim);
  if (by_sigma) label += "_k" + std::to_string(r.generator.intrinsic_dim);
  return label;
}

}  // namespace

void ExperimentSpec::validate() const {
  generator.validate();
  if (replicates < 1) throw InputError("experiment needs B >= 1 replicates");
  if (n < 2) throw InputError("experiment needs sample size n >= 2");
  if (estimators.empty()) throw InputError("experiment needs at least one estimator");
  if (!(noise.sigma >= 0.0)) throw InputError("noise sigma must be nonnegative");
  if (!(pw_quantile > 0.0 && pw_quantile <= 1.0)) throw InputError("quantile must lie in (0, 1]");
}

EstimatorSummary summarize(Method method, std::vector<ReplicateRecord> records,
                           std::size_t true_dim) {
  EstimatorSummary s;
  s.method = method;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t correct = 0;
  for (const auto& r : records) {
    s.seconds += r.seconds;
    if (!r.value) {
      ++s.failures;
      continue;
    }
    ++s.successes;
    sum += *r.value;
    lo = std::min(lo, *r.value);
    hi = std::max(hi, *r.value);
    if (r.rounded == static_cast<int>(true_dim)) ++correct;
  }
  if (s.successes > 0) {
    s.mean = std::clamp(sum / static_cast<double>(s.successes), lo, hi);
    if (s.successes > 1) {
      double ss = 0.0;
      for (const auto& r : records) {
        if (r.value) ss += (*r.value - s.mean) * (*r.value - s.mean);
      }
      s.std_dev = std::sqrt(ss / static_cast<double>(s.successes - 1));
    }
    s.proportion_correct = static_cast<double>(correct) / static_cast<double>(s.successes);
  }
  s.failed = s.successes == 0 || 5 * s.failures > records.size();
  s.records = std::move(records);
  return s;
}

const EstimatorSummary& ExperimentResult::at(Method method) const {
  for (const auto& e : estimators) {
    if (e.method == method) return e;
  }
  throw InputError("estimator '" + std::string(to_string(method)) + "' was not run");
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::vector<ReplicateRecord>> per_replicate(spec.replicates);
  parallel_for(spec.replicates, spec.threads,
               [&](std::size_t b) { per_replicate[b] = run_replicate(spec, b); });

  ExperimentResult result;
  result.generator = spec.generator;
  result.sigma = spec.noise.sigma;
  result.n = spec.n;
  result.replicates = spec.replicates;
  result.master_seed = spec.master_seed;
  result.timed = spec.record_timing;
  for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
    std::vector<ReplicateRecord> records;
    records.reserve(spec.replicates);
    for (const auto& rep : per_replicate) records.push_back(rep[e]);
    result.estimators.push_back(
        summarize(spec.estimators[e], std::move(records), spec.generator.intrinsic_dim));
  }
  return result;
}

std::vector<ExperimentResult> noise_sweep(const ExperimentSpec& spec,
                                          const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw InputError("noise sweep needs at least one sigma");
  for (double s : sigmas) {
    if (!(s >= 0.0)) throw InputError("noise sigma must be nonnegative");
  }
  std::vector<ExperimentResult> out;
  out.reserve(sigmas.size());
  for (double s : sigmas) {
    ExperimentSpec cell = spec;
    cell.noise.sigma = s;
    out.push_back(run_experiment(cell));
  }
  return out;
}

std::vector<ExperimentSpec> table1_specs(const ExperimentSpec& base,
                                         const std::vector<std::size_t>& ambient_dims) {
  std::vector<ExperimentSpec> out;
  for (std::size_t d : ambient_dims) {
    if (d < 1) throw InputError("ambient dimension must be positive");
    const std::size_t lowest = d == 1 ? 1 : 2;
    for (std::size_t k = d; k >= lowest; --k) {
      ExperimentSpec cell = base;
      cell.generator.kind = GeneratorKind::Hypercube;
      cell.generator.ambient_dim = d;
      cell.generator.intrinsic_dim = k;
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<std::string> manifold_names() { return {"M1", "M2", "M5", "M7", "M9"}; }

GeneratorSpec manifold_generator(const std::string& name) {
  GeneratorSpec g;
  if (name == "M1") {
    g.kind = GeneratorKind::Sphere;
    g.ambient_dim = 11;
    g.intrinsic_dim = 10;
  } else if (name == "M2") {
    g.kind = GeneratorKind::Affine;
    g.ambient_dim = 5;
    g.intrinsic_dim = 3;
  } else if (name == "M5") {
    g.kind = GeneratorKind::Helix;
    g.ambient_dim = 3;
    g.intrinsic_dim = 2;
  } else if (name == "M7") {
    g.kind = GeneratorKind::SwissRoll;
    g.ambient_dim = 3;
    g.intrinsic_dim = 2;
  } else if (name == "M9") {
    g.kind = GeneratorKind::Affine;
    g.ambient_dim = 20;
    g.intrinsic_dim = 20;
  } else {
    throw InputError("unknown manifold '" + name + "' (available: M1, M2, M5, M7, M9)");
  }
  return g;
}

CdInvarianceReport cd_invariance_check(std::size_t n, std::size_t replicates, std::uint64_t seed,
                                       double scale, unsigned threads) {
  if (replicates < 1) throw InputError("invariance check needs B >= 1");
  if (n < 1) throw InputError("invariance check needs n >= 1");
  if (!(scale > 0.0)) throw InputError("scale must be positive");

  CdInvarianceReport rep;
  rep.n = n;
  rep.replicates = replicates;
  rep.scale = scale;
  rep.reliable = n >= 500;
  rep.uniform_values.resize(replicates);
  rep.triangular_values.resize(replicates);

  auto estimate = [](const std::vector<double>& coords) -> std::optional<double> {
    try {
      const PointCloud cloud(coords, 2);
      return est_correlation(cloud, default_schedule(cloud)).value;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };

  parallel_for(replicates, threads, [&](std::size_t b) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> coords(2 * n);
    Rng uniform_rng(derive_seed(seed, b, "cd-uniform"));
    for (auto& c : coords) c = scale * unit(uniform_rng);
    rep.uniform_values[b] = estimate(coords);
    // density 2x on [0,1]: inverse CDF sqrt(u)
    Rng triangular_rng(derive_seed(seed, b, "cd-triangular"));
    for (auto& c : coords) c = scale * std::sqrt(unit(triangular_rng));
    rep.triangular_values[b] = estimate(coords);
  });

  auto pass_rate = [&](const std::vector<std::optional<double>>& values) {
    const auto hits = std::count_if(values.begin(), values.end(), [](const auto& v) {
      return v && nearest_integer(*v) == 2;
    });
    return static_cast<double>(hits) / static_cast<double>(values.size());
  };
  rep.uniform_pass_rate = pass_rate(rep.uniform_values);
  rep.triangular_pass_rate = pass_rate(rep.triangular_values);
  rep.passes = rep.uniform_pass_rate >= 0.9 && rep.triangular_pass_rate >= 0.9;
  return rep;
}

void write_raw_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "experiment,replicate,estimator,value,rounded,seconds\n";
  for (std::size_t x = 0; x < results.size(); ++x) {
    const auto& res = results[x];
    for (std::size_t b = 0; b < res.replicates; ++b) {
      for (const auto& est : res.estimators) {
        const auto& rec = est.records[b];
        out << x << ',' << rec.replicate << ',' << to_string(est.method) << ',';
        if (rec.value) out << format_double(*rec.value) << ',' << rec.rounded;
        else out << ',';
        out << ',';
        if (res.timed) out << format_double(rec.seconds);
        out << '\n';
      }
    }
  }
}

std::vector<RawRow> read_raw_csv(std::istream& in) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) {
      throw InputError("raw CSV line " + std::to_string(line_no) + ": expected 6 fields");
    }
    RawRow row;
    row.experiment = std::stoul(f[0]);
    row.record.replicate = std::stoul(f[1]);
    row.method = parse_method(f[2]);
    row.record.value = parse_optional_double(f[3]);
    row.record.rounded = f[4].empty() ? 0 : std::stoi(f[4]);
    row.record.seconds = parse_optional_double(f[5]).value_or(0.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string aggregate_json(const std::vector<ExperimentResult>& results) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& res : results) {
    nlohmann::ordered_json row;
    row["generator"] = std::string(to_string(res.generator.kind));
    row["d"] = res.generator.ambient_dim;
    row["intrinsic_dim"] = res.generator.intrinsic_dim;
    row["n"] = res.n;
    row["B"] = res.replicates;
    row["sigma"] = res.sigma;
    row["master_seed"] = res.master_seed;
    nlohmann::ordered_json ests = nlohmann::ordered_json::object();
    for (const auto& e : res.estimators) {
      nlohmann::ordered_json j;
      j["mean"] = e.mean;
      j["std"] = e.std_dev;
      j["proportion_correct"] = e.proportion_correct;
      j["successes"] = e.successes;
      j["failures"] = e.failures;
      j["failed"] = e.failed;
      if (res.timed) j["seconds"] = e.seconds;
      ests[std::string(to_string(e.method))] = std::move(j);
    }
    row["estimators"] = std::move(ests);
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

void write_plot_csv(std::ostream& out, const std::vector<ExperimentResult>& results,
                    bool by_sigma) {
  out << "x,y,series\n";
  for (const auto& res : results) {
    for (const auto& e : res.estimators) {
      if (e.successes == 0) continue;
      const double x =
          by_sigma ? res.sigma : static_cast<double>(res.generator.intrinsic_dim);
      out << format_double(x) << ',' << format_double(e.mean) << ','
          << series_label(res, e.method, by_sigma) << '\n';
    }
  }
}

}  // namespace intdim
