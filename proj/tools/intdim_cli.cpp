// intdim: generate point clouds, estimate intrinsic dimension, run the benchmark grids.

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "intdim/bench.hpp"
#include "intdim/csv_io.hpp"
#include "intdim/errors.hpp"
#include "intdim/estimators.hpp"
#include "intdim/generators.hpp"
#include "intdim/rng.hpp"
#include "intdim/schedule.hpp"
#include "intdim/volume.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace intdim;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitEstimation = 2;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::string config;
  int verbosity = 0;
  bool quiet = false;
};

void log(const Globals& g, const std::string& msg) {
  if (g.verbosity > 0 && !g.quiet) std::cerr << msg << '\n';
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& entry : names) {
    std::stringstream ss(entry);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) out.push_back(parse_method(name));
    }
  }
  return out;
}

// Experiment settings shared by table1, table2 and noise. Config file values are
// applied first; flags given on the command line win.
struct ExperimentFlags {
  std::size_t n = 2500;
  std::size_t replicates = 20;
  std::vector<std::string> estimators;
  double lower_quantile = DefaultGridOptions{}.lower_quantile;
  double upper_quantile = DefaultGridOptions{}.upper_quantile;
  std::size_t grid_m = DefaultGridOptions{}.m;
  double pw_quantile = 0.9;
  std::size_t mc_samples = 100000;
  bool timing = false;

  std::vector<CLI::Option*> options;

  void attach(CLI::App* cmd, std::size_t default_b) {
    replicates = default_b;
    options = {
        cmd->add_option("--n", n, "sample size")->capture_default_str(),
        cmd->add_option("--B", replicates, "replicates per cell")->capture_default_str(),
        cmd->add_option("--estimators", estimators, "subset of bc,cap,cd,pw,vol,polyvol"),
        cmd->add_option("--lower-quantile", lower_quantile,
                        "pairwise-distance quantile for the smallest grid radius"),
        cmd->add_option("--upper-quantile", upper_quantile,
                        "pairwise-distance quantile for the largest grid radius"),
        cmd->add_option("--grid-m", grid_m, "radii in the adaptive grid"),
        cmd->add_option("--pw-quantile", pw_quantile, "order statistic for global pointwise"),
        cmd->add_option("--mc-samples", mc_samples, "Monte-Carlo budget for vol/polyvol"),
    };
    cmd->add_flag("--timing", timing, "record wall-clock seconds in the raw CSV");
  }

  bool given(const std::string& name) const {
    for (const auto* o : options) {
      if (o->check_lname(name.substr(2)) && o->count() > 0) return true;
    }
    return false;
  }
};

ExperimentSpec base_spec(const Globals& g, const ExperimentFlags& f,
                         std::vector<Method> default_methods) {
  ExperimentSpec spec;
  spec.master_seed = g.seed;
  spec.threads = g.threads;
  spec.estimators = std::move(default_methods);

  if (!g.config.empty()) {
    if (!fs::exists(g.config)) throw InputError("no such input: " + g.config);
    boost::property_tree::ptree tree;
    boost::property_tree::ini_parser::read_ini(g.config, tree);
    for (const auto& [section, body] : tree) {
      for (const auto& [key, node] : body) {
        const std::string where = section + "." + key;
        const auto& v = node.data();
        if (where == "experiment.n") spec.n = std::stoul(v);
        else if (where == "experiment.B") spec.replicates = std::stoul(v);
        else if (where == "experiment.seed") spec.master_seed = std::stoull(v);
        else if (where == "experiment.estimators") spec.estimators = parse_methods({v});
        else if (where == "grid.lower_quantile") spec.grid.lower_quantile = std::stod(v);
        else if (where == "grid.upper_quantile") spec.grid.upper_quantile = std::stod(v);
        else if (where == "grid.m") spec.grid.m = std::stoul(v);
        else if (where == "grid.subsample") spec.grid.subsample = std::stoul(v);
        else if (where == "pw.quantile") spec.pw_quantile = std::stod(v);
        else if (where == "vol.mc_samples") spec.mc_samples = std::stoul(v);
        else if (where == "polyvol.grid") spec.poly_grid = std::stoul(v);
        else if (where == "polyvol.fit_radius") spec.poly_fit_radius = std::stod(v);
        else if (where == "polyvol.r0") spec.poly_r0 = std::stod(v);
        else throw InputError("unknown config key '" + where + "'");
      }
    }
  }

  if (f.given("--n")) spec.n = f.n;
  if (f.given("--B")) spec.replicates = f.replicates;
  else if (g.config.empty()) spec.replicates = f.replicates;
  if (f.given("--estimators")) spec.estimators = parse_methods(f.estimators);
  if (f.given("--lower-quantile")) spec.grid.lower_quantile = f.lower_quantile;
  if (f.given("--upper-quantile")) spec.grid.upper_quantile = f.upper_quantile;
  if (f.given("--grid-m")) spec.grid.m = f.grid_m;
  if (f.given("--pw-quantile")) spec.pw_quantile = f.pw_quantile;
  if (f.given("--mc-samples")) spec.mc_samples = f.mc_samples;
  spec.record_timing = f.timing;
  return spec;
}

void write_artifacts(const Globals& g, const std::string& stem,
                     const std::vector<ExperimentResult>& results, bool by_sigma) {
  fs::create_directories(g.out_dir);
  const fs::path dir(g.out_dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open(stem + ".json");
    out << aggregate_json(results) << '\n';
  }
  {
    auto out = open(stem + "_raw.csv");
    write_raw_csv(out, results);
  }
  {
    auto out = open(stem + "_plot.csv");
    write_plot_csv(out, results, by_sigma);
  }
  log(g, "wrote " + (dir / (stem + ".json")).string());
}

// Exit 2 when an estimator broke down on more than 20% of replicates.
int experiment_status(const std::vector<ExperimentResult>& results) {
  int status = 0;
  for (const auto& r : results) {
    for (const auto& e : r.estimators) {
      if (e.failed) {
        std::cerr << "estimator " << to_string(e.method) << " failed on " << e.failures << " of "
                  << r.replicates << " replicates (d=" << r.generator.ambient_dim
                  << ", k=" << r.generator.intrinsic_dim << ", sigma=" << r.sigma << ")";
        for (const auto& rec : e.records) {
          if (!rec.error.empty()) {
            std::cerr << ": " << rec.error;
            break;
          }
        }
        std::cerr << '\n';
        status = kExitEstimation;
      }
    }
  }
  return status;
}

// --- estimate -------------------------------------------------------------

struct EstimateFlags {
  std::string input;
  std::vector<std::string> estimators;
  std::optional<double> r;
  std::optional<double> r1;
  std::optional<double> r2;
  std::vector<double> radii;
  std::optional<double> r_min;
  std::optional<double> r_max;
  std::size_t m = 20;
  std::string rate;
  double d_prime = 0.0;
  double beta = 1.0;
  double c = 10.0;
  double delta = 1.0;
  double dim_cd = 0.0;
  double quantile = 0.9;
  std::size_t mc_samples = 100000;
  std::optional<double> fit_radius;
  std::optional<double> r0;
  std::size_t poly_grid = 20;
  bool timing = false;
};

std::optional<ScaleSchedule> requested_schedule(const EstimateFlags& f, const PointCloud& cloud) {
  if (!f.radii.empty()) return explicit_schedule(f.radii);
  if (f.r_min || f.r_max) {
    if (!f.r_min || !f.r_max) throw InputError("--r-min and --r-max go together");
    return make_schedule(LogLogGrid{*f.r_min, *f.r_max, f.m}, cloud.size());
  }
  if (f.r) return explicit_schedule({*f.r});
  if (!f.rate.empty()) {
    // d' = d + 1 when not given: a heuristic stand-in for the unknown standardness exponent
    const double d_prime = f.d_prime > 0.0 ? f.d_prime : static_cast<double>(cloud.dim() + 1);
    ScheduleProvenance prov;
    if (f.rate == "volume") prov = VolumeRate{d_prime, std::nullopt};
    else if (f.rate == "correlation")
      prov = CorrelationRate{f.beta, f.dim_cd > 0.0 ? f.dim_cd : d_prime};
    else if (f.rate == "pointwise") prov = PointwiseRate{f.c, f.delta, d_prime};
    else if (f.rate == "uniform-pointwise")
      prov = UniformPointwiseRate{f.beta, f.delta, d_prime, cloud.dim()};
    else throw InputError("unknown rate '" + f.rate + "'");
    return make_schedule(prov, cloud.size());
  }
  return std::nullopt;
}

json estimate_record(const DimensionEstimate& e) {
  json j;
  j["estimator"] = std::string(to_string(e.method));
  j["value"] = e.value;
  j["rounded"] = e.rounded;
  j["scales"] = e.scales;
  if (e.fit) {
    j["slope_points"] = e.fit->points;
    j["r_squared"] = e.fit->r_squared;
  }
  if (e.method == Method::Pointwise) j["excluded"] = e.excluded;
  if (e.dropped_scales > 0) j["dropped_scales"] = e.dropped_scales;
  return j;
}

int cmd_estimate(const Globals& g, const EstimateFlags& f) {
  const PointCloud cloud = load_point_cloud_csv(f.input);
  auto methods = parse_methods(f.estimators);
  if (methods.empty()) {
    methods = {Method::BoxCount, Method::Capacity, Method::Correlation, Method::Pointwise};
  }
  const MonteCarloOptions mc{f.mc_samples, derive_seed(g.seed, 0, "volume"), g.threads};

  std::optional<ScaleSchedule> schedule;
  auto schedule_or_default = [&]() -> const ScaleSchedule& {
    if (!schedule) {
      schedule = requested_schedule(f, cloud);
      if (!schedule) schedule = default_schedule(cloud);
    }
    return *schedule;
  };

  json out;
  out["input"] = f.input;
  out["n"] = cloud.size();
  out["d"] = cloud.dim();
  out["estimates"] = json::array();
  for (Method m : methods) {
    const auto start = std::chrono::steady_clock::now();
    json rec;
    switch (m) {
      case Method::Capacity:
        if (f.r1 || f.r2) {
          if (!f.r1 || !f.r2) throw InputError("--r1 and --r2 go together");
          rec = estimate_record(est_capacity_two_scale(cloud, *f.r1, *f.r2));
        } else if (f.r) {
          rec = estimate_record(est_capacity(cloud, *f.r));
        } else {
          const auto& s = schedule_or_default();
          rec = estimate_record(s.size() == 1
                                    ? est_capacity(cloud, s.radii.front())
                                    : est_capacity_two_scale(cloud, s.radii.front(),
                                                             s.radii.back()));
        }
        break;
      case Method::BoxCount:
        rec = estimate_record(est_boxcount(cloud, schedule_or_default()));
        break;
      case Method::Correlation:
        rec = estimate_record(est_correlation(cloud, schedule_or_default()));
        break;
      case Method::Pointwise:
        rec = estimate_record(
            est_pointwise_global(cloud, schedule_or_default(), f.quantile, g.threads));
        break;
      case Method::Volume: {
        const double r = f.r ? *f.r : schedule_or_default().radii.back();
        const auto vol = empirical_volume(cloud, r, mc);
        rec = estimate_record(volume_dimension(cloud.dim(), vol));
        rec["volume"] = vol.value;
        rec["std_error"] = vol.std_error;
        break;
      }
      case Method::PolyVolume: {
        const double diameter = cloud.diameter();
        const double fit_radius = f.fit_radius.value_or(0.1 * diameter);
        const double r0 = f.r0.value_or(0.01 * diameter);
        const auto poly = fit_volume_polynomial(
            cloud, fit_radius, std::max(f.poly_grid, cloud.dim() + 2), mc);
        const auto pv = est_polyvol_dim(poly, r0, cloud.dim());
        rec = estimate_record(pv.estimate);
        rec["coefficients"] = poly.coeffs;
        rec["fit_radius"] = fit_radius;
        rec["r0"] = r0;
        rec["residual"] = poly.residual;
        rec["leading_order"] = pv.leading_order;
        rec["condition_value"] = pv.condition_value;
        rec["condition_holds"] = pv.condition_holds;
        break;
      }
    }
    if (f.timing) {
      rec["seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    out["estimates"].push_back(std::move(rec));
  }
  if (schedule) out["schedule"] = describe(schedule->provenance);
  std::cout << out.dump(2) << '\n';
  return 0;
}

// --- generate -------------------------------------------------------------

struct GenerateFlags {
  std::string kind = "hypercube";
  std::size_t d = 2;
  std::optional<std::size_t> k;
  std::size_t n = 1000;
  double sigma = 0.0;
  double radius = 1.0;
  double pitch = 0.5;
  double turns = 2.0;
  std::string output;
  bool header = false;
};

int cmd_generate(const Globals& g, const GenerateFlags& f) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(f.kind);
  spec.ambient_dim = f.d;
  spec.intrinsic_dim = f.k.value_or(spec.kind == GeneratorKind::Sphere ? f.d - 1 : f.d);
  spec.seed = derive_seed(g.seed, 0, "sample");
  spec.radius = f.radius;
  spec.pitch = f.pitch;
  spec.turns = f.turns;
  if (f.n < 1) throw InputError("--n must be at least 1");
  const PointCloud cloud =
      add_noise(sample(spec, f.n), NoiseSpec{f.sigma}, derive_seed(g.seed, 0, "noise"));
  if (f.output.empty() || f.output == "-") {
    write_point_cloud_csv(std::cout, cloud, f.header);
  } else {
    save_point_cloud_csv(f.output, cloud, f.header);
    log(g, "wrote " + f.output);
  }
  return 0;
}

// --- lemma1-check / cd-invariance ------------------------------------------

int cmd_lemma1(const Globals& g, const std::string& input, const std::vector<double>& radii,
               std::size_t mc_samples) {
  const PointCloud cloud = load_point_cloud_csv(input);
  json out;
  out["input"] = input;
  out["checks"] = json::array();
  bool all = true;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto rep =
        lemma1_check(cloud, radii[i], {mc_samples, derive_seed(g.seed, i, "volume"), g.threads});
    json j;
    j["r"] = radii[i];
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["mc_margin"] = rep.mc_margin;
    j["holds"] = rep.holds;
    j["volume_dim"] = rep.volume_dim;
    j["capacity_dim"] = rep.capacity_dim;
    j["separated"] = rep.separated;
    j["volume"] = rep.volume.value;
    j["exact"] = rep.volume.method == VolumeMethod::Exact1d;
    all = all && rep.holds;
    out["checks"].push_back(std::move(j));
  }
  out["all_hold"] = all;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_cd_invariance(const Globals& g, std::size_t n, std::size_t b, double scale) {
  const auto rep = cd_invariance_check(n, b, g.seed, scale, g.threads);
  auto values = [](const std::vector<std::optional<double>>& v) {
    json arr = json::array();
    for (const auto& x : v) {
      if (x) arr.push_back(*x);
      else arr.push_back(nullptr);
    }
    return arr;
  };
  json out;
  out["n"] = rep.n;
  out["B"] = rep.replicates;
  out["scale"] = rep.scale;
  out["uniform_pass_rate"] = rep.uniform_pass_rate;
  out["triangular_pass_rate"] = rep.triangular_pass_rate;
  out["passes"] = rep.passes;
  out["reliable"] = rep.reliable;
  out["uniform_values"] = values(rep.uniform_values);
  out["triangular_values"] = values(rep.triangular_values);
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic-dimension estimation toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for table/noise artifacts");
  app.add_option("--config", g.config, "INI file overriding experiment defaults");
  app.add_flag("-v,--verbose", g.verbosity, "progress messages on stderr");
  app.add_flag("-q,--quiet", g.quiet, "suppress progress messages");
  app.fallthrough();

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "sample a ground-truth set to CSV");
  generate->add_option("--kind", gen.kind, "hypercube, sphere, affine, swiss_roll or helix")
      ->capture_default_str();
  generate->add_option("--d", gen.d, "ambient dimension")->capture_default_str();
  generate->add_option("--k", gen.k, "intrinsic dimension (default d, or d-1 for sphere)");
  generate->add_option("--n", gen.n, "points")->capture_default_str();
  generate->add_option("--sigma", gen.sigma, "Gaussian noise level");
  generate->add_option("--radius", gen.radius, "sphere radius");
  generate->add_option("--pitch", gen.pitch, "helicoid pitch");
  generate->add_option("--turns", gen.turns, "helicoid turns");
  generate->add_option("-o,--output", gen.output, "output CSV (default stdout)");
  generate->add_flag("--header", gen.header, "write an x0,x1,... header row");

  EstimateFlags est;
  auto* estimate = app.add_subcommand("estimate", "estimate the dimension of a CSV point cloud");
  estimate->add_option("input", est.input, "CSV file, one point per row")->required();
  estimate->add_option("--estimator", est.estimators, "bc, cap, cd, pw, vol, polyvol (repeatable)");
  estimate->add_option("--r", est.r, "single scale");
  estimate->add_option("--r1", est.r1, "two-scale capacity: larger radius");
  estimate->add_option("--r2", est.r2, "two-scale capacity: smaller radius");
  estimate->add_option("--radii", est.radii, "explicit radii")->delimiter(',');
  estimate->add_option("--r-min", est.r_min, "log-log grid lower end");
  estimate->add_option("--r-max", est.r_max, "log-log grid upper end");
  estimate->add_option("--m", est.m, "log-log grid size")->capture_default_str();
  estimate->add_option("--rate", est.rate,
                       "rate schedule: volume, correlation, pointwise or uniform-pointwise");
  estimate->add_option("--d-prime", est.d_prime, "rate exponent d' (default: ambient d + 1)");
  estimate->add_option("--beta", est.beta, "rate constant beta")->capture_default_str();
  estimate->add_option("--c", est.c, "pointwise rate constant C")->capture_default_str();
  estimate->add_option("--delta", est.delta, "standardness constant")->capture_default_str();
  estimate->add_option("--dim-cd", est.dim_cd, "correlation-dimension guess for the cd rate");
  estimate->add_option("--quantile", est.quantile, "pointwise order statistic")
      ->capture_default_str();
  estimate->add_option("--mc-samples", est.mc_samples, "Monte-Carlo budget")
      ->capture_default_str();
  estimate->add_option("--fit-radius", est.fit_radius, "polyvol fit interval R");
  estimate->add_option("--r0", est.r0, "polyvol evaluation radius");
  estimate->add_option("--poly-grid", est.poly_grid, "polyvol grid size m")
      ->capture_default_str();
  estimate->add_flag("--timing", est.timing, "report seconds per estimator");

  ExperimentFlags t1;
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7};
  auto* table1 = app.add_subcommand("table1", "hypercube grid over ambient and intrinsic dimension");
  t1.attach(table1, 20);
  table1->add_option("--dims", dims, "ambient dimensions")->delimiter(',');

  ExperimentFlags t2;
  std::vector<std::string> manifolds = manifold_names();
  auto* table2 = app.add_subcommand("table2", "manifold benchmark subset");
  t2.attach(table2, 20);
  table2->add_option("--manifolds", manifolds, "subset of M1,M2,M5,M7,M9")->delimiter(',');

  ExperimentFlags nz;
  std::size_t noise_d = 5;
  std::size_t noise_k = 2;
  std::vector<double> sigmas{0.0, 0.005, 0.01, 0.02, 0.05};
  auto* noise = app.add_subcommand("noise", "noise sweep on a flat hypercube");
  nz.attach(noise, 10);
  noise->add_option("--d", noise_d, "ambient dimension")->capture_default_str();
  noise->add_option("--k", noise_k, "intrinsic dimension")->capture_default_str();
  noise->add_option("--sigmas", sigmas, "noise levels")->delimiter(',');

  std::string lemma_input;
  std::vector<double> lemma_radii{0.1, 0.3, 0.7};
  std::size_t lemma_mc = 500000;
  auto* lemma = app.add_subcommand("lemma1-check", "volume/capacity sandwich on a CSV cloud");
  lemma->add_option("input", lemma_input, "CSV file")->required();
  lemma->add_option("--r", lemma_radii, "radii in (0, 1)")->delimiter(',');
  lemma->add_option("--mc-samples", lemma_mc, "Monte-Carlo budget")->capture_default_str();

  std::size_t cd_n = 2500;
  std::size_t cd_b = 10;
  double cd_scale = 1.0;
  auto* cdinv = app.add_subcommand("cd-invariance", "correlation dimension under two densities");
  cdinv->add_option("--n", cd_n, "sample size")->capture_default_str();
  cdinv->add_option("--B", cd_b, "replicates")->capture_default_str();
  cdinv->add_option("--scale", cd_scale, "scale both samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(g, gen);
    if (*estimate) return cmd_estimate(g, est);
    if (*lemma) return cmd_lemma1(g, lemma_input, lemma_radii, lemma_mc);
    if (*cdinv) return cmd_cd_invariance(g, cd_n, cd_b, cd_scale);
    if (*table1) {
      const auto base = base_spec(g, t1, {Method::BoxCount, Method::Capacity, Method::Correlation,
                                          Method::Pointwise});
      std::vector<ExperimentResult> results;
      for (const auto& spec : table1_specs(base, dims)) {
        log(g, "table1 d=" + std::to_string(spec.generator.ambient_dim) +
                   " k=" + std::to_string(spec.generator.intrinsic_dim));
        results.push_back(run_experiment(spec));
      }
      write_artifacts(g, "table1", results, false);
      return experiment_status(results);
    }
    if (*table2) {
      auto base = base_spec(g, t2, {Method::Correlation, Method::Pointwise});
      std::vector<ExperimentResult> results;
      for (const auto& name : manifolds) {
        ExperimentSpec spec = base;
        spec.generator = manifold_generator(name);
        log(g, "table2 " + name);
        results.push_back(run_experiment(spec));
      }
      write_artifacts(g, "table2", results, false);
      return experiment_status(results);
    }
    if (*noise) {
      auto base = base_spec(g, nz, {Method::Pointwise});
      base.generator.kind = GeneratorKind::Hypercube;
      base.generator.ambient_dim = noise_d;
      base.generator.intrinsic_dim = noise_k;
      const auto results = noise_sweep(base, sigmas);
      write_artifacts(g, "noise", results, true);
      return experiment_status(results);
    }
  } catch (const EstimationError& e) {
    std::cerr << "estimation failed: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const boost::property_tree::ptree_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {  // std::stoul and friends on bad config values
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
