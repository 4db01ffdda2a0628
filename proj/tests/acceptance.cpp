// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "intdim/bench.hpp"
#include "intdim/errors.hpp"
#include "intdim/generators.hpp"
#include "intdim/rng.hpp"
#include "intdim/volume.hpp"
#include "oracles.hpp"

using namespace intdim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool pass = false;
  std::string detail;
};

ExperimentSpec hypercube(std::size_t d, std::size_t k, std::size_t b, std::vector<Method> methods) {
  ExperimentSpec s;
  s.generator.kind = GeneratorKind::Hypercube;
  s.generator.ambient_dim = d;
  s.generator.intrinsic_dim = k;
  s.n = 2500;
  s.replicates = b;
  s.estimators = std::move(methods);
  s.master_seed = kSeed;
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

bool within(double v, double center, double tol) { return std::abs(v - center) <= tol; }

const std::vector<Method> kTable1 = {Method::BoxCount, Method::Capacity, Method::Correlation,
                                     Method::Pointwise};

std::vector<ExperimentResult> table1_rows;  // shared by criteria 1 and 2

const ExperimentResult* find_row(std::size_t d, std::size_t k) {
  for (const auto& r : table1_rows) {
    if (r.generator.ambient_dim == d && r.generator.intrinsic_dim == k) return &r;
  }
  return nullptr;
}

Verdict criterion1() {
  struct Target {
    std::size_t d;
    std::optional<double> cd;
    double cd_tol;
    double pw;
    double pw_tol;
  };
  const Target targets[] = {{2, 1.89, 0.2, 2.15, 0.2}, {3, 2.86, 0.2, 3.16, 0.2},
                            {5, std::nullopt, 0.0, 5.01, 0.3}};
  Verdict v{true, ""};
  for (const auto& t : targets) {
    const auto* row = find_row(t.d, t.d);
    const auto& cd = row->at(Method::Correlation);
    const auto& pw = row->at(Method::Pointwise);
    bool ok = !pw.failed && within(pw.mean, t.pw, t.pw_tol) && pw.proportion_correct >= 0.9;
    if (t.cd) ok = ok && !cd.failed && within(cd.mean, *t.cd, t.cd_tol);
    v.pass = v.pass && ok;
    v.detail += "(" + std::to_string(t.d) + "," + std::to_string(t.d) + ") cd=" + fmt(cd.mean) +
                " pw=" + fmt(pw.mean) + " pw_correct=" + fmt(pw.proportion_correct) + "; ";
  }
  return v;
}

Verdict criterion2() {
  Verdict v{true, ""};
  for (std::size_t d = 3; d <= 7; ++d) {
    for (std::size_t k = 3; k <= d; ++k) {
      const auto* row = find_row(d, k);
      const double bc = row->at(Method::BoxCount).mean;
      const double cap = row->at(Method::Capacity).mean;
      const bool ok = !row->at(Method::BoxCount).failed && !row->at(Method::Capacity).failed &&
                      bc < static_cast<double>(k) && cap < static_cast<double>(k);
      if (!ok) {
        v.pass = false;
        v.detail += "(" + std::to_string(d) + "," + std::to_string(k) + ") bc=" + fmt(bc) +
                    " cap=" + fmt(cap) + "; ";
      }
    }
  }
  const auto* top = find_row(7, 7);
  v.detail += "15 rows; e.g. (7,7) bc=" + fmt(top->at(Method::BoxCount).mean) +
              " cap=" + fmt(top->at(Method::Capacity).mean);
  return v;
}

double rounded_share(const EstimatorSummary& s, int target) {
  std::size_t hits = 0;
  for (const auto& r : s.records) hits += r.value && r.rounded == target;
  return static_cast<double>(hits) / static_cast<double>(s.records.size());
}

Verdict criterion3() {
  ExperimentSpec s;
  s.n = 2500;
  s.replicates = 5;
  s.master_seed = kSeed;
  s.estimators = {Method::Correlation, Method::Pointwise};
  s.generator = manifold_generator("M1");
  const auto m1 = run_experiment(s);
  s.generator = manifold_generator("M2");
  const auto m2 = run_experiment(s);
  const double m1_pw = rounded_share(m1.at(Method::Pointwise), 10);
  const double m2_cd = rounded_share(m2.at(Method::Correlation), 3);
  const double m2_pw = rounded_share(m2.at(Method::Pointwise), 3);
  return {m1_pw >= 0.8 && m2_cd >= 0.8 && m2_pw >= 0.8,
          "M1 pw->10 " + fmt(m1_pw) + " (mean " + fmt(m1.at(Method::Pointwise).mean) +
              "); M2 cd->3 " + fmt(m2_cd) + ", pw->3 " + fmt(m2_pw)};
}

Verdict criterion4() {
  auto s = hypercube(5, 2, 10, {Method::Pointwise});
  const auto res = noise_sweep(s, {0.0, 0.005, 0.05});
  const double m0 = res[0].at(Method::Pointwise).mean;
  const double m1 = res[1].at(Method::Pointwise).mean;
  const double m2 = res[2].at(Method::Pointwise).mean;
  return {m2 > m0 && std::abs(m1 - m0) <= 0.3,
          "pw mean sigma=0: " + fmt(m0) + ", 0.005: " + fmt(m1) + ", 0.05: " + fmt(m2)};
}

Verdict criterion5() {
  std::mt19937_64 rng(kSeed);
  std::size_t exact_ok = 0;
  double worst_slack = INFINITY;
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<double> xs(n);
    for (auto& x : xs) x = u(rng);
    const PointCloud cloud(xs, 1);
    bool all = true;
    for (double r : {0.1, 0.3, 0.7}) {
      const auto rep = lemma1_check(cloud, r, {100000, 0, 1});
      all = all && rep.holds && rep.mc_margin == 0.0;
      worst_slack = std::min(worst_slack, rep.rhs - rep.lhs);
    }
    exact_ok += all;
  }
  std::size_t mc_ok = 0;
  for (std::uint64_t c = 0; c < 10; ++c) {
    GeneratorSpec g;
    g.ambient_dim = 2;
    g.intrinsic_dim = c % 2 == 0 ? 2 : 1;
    g.seed = derive_seed(kSeed, c, "lemma-cloud");
    const auto cloud = sample(g, 300 + 50 * c);
    const double r = c % 3 == 0 ? 0.1 : (c % 3 == 1 ? 0.3 : 0.05);
    const auto rep = lemma1_check(cloud, r, {500000, derive_seed(kSeed, c, "volume"), 1});
    mc_ok += rep.holds;
  }
  return {exact_ok == 50 && mc_ok == 10, "exact 1-d clouds " + std::to_string(exact_ok) +
                                             "/50 (min rhs-lhs " + fmt(worst_slack) +
                                             "), Monte-Carlo 2-d clouds " +
                                             std::to_string(mc_ok) + "/10"};
}

Verdict criterion6() {
  std::mt19937_64 rng(kSeed);
  std::size_t agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 300)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const PointCloud c = oracle::random_cloud(rng, n, d);
    const double r = oracle::random_radius(rng, c);
    bool ok = c.count_pairs_within(r) == oracle::count_pairs(c, r) &&
              c.box_count(r) == oracle::box_count(c, r) && p_hat(c, r) == oracle::p_hat(c, r);
    for (std::size_t i = 0; i < n && ok; i += 1 + n / 10) {
      ok = c.count_within(c.point(i), r) == oracle::count_within(c, c.point(i), r, false) &&
           c.count_within(c.point(i), r, true) == oracle::count_within(c, c.point(i), r, true);
    }
    agree += ok;
  }
  return {agree == 200, std::to_string(agree) + "/200 instances identical"};
}

Verdict criterion7() {
  std::mt19937_64 rng(kSeed + 7);
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = 3.0 * u(rng);
    const PointCloud c(xs, 1);
    // small radii keep gaps between the intervals, so the hit rate stays below 1
    const double r = 0.001 + 0.01 * u(rng);
    const auto mc = empirical_volume(c, r, {200000, derive_seed(kSeed, i, "volume"), 1});
    const double exact = exact_volume_1d(c, r).value;
    const double diff = std::abs(mc.value - exact);
    if (mc.std_error == 0.0) {
      // every sample hit: the box is the union, and the estimate has no variance
      ok += diff <= 1e-12 * exact;
      continue;
    }
    worst = std::max(worst, diff / mc.std_error);
    ok += diff <= 3.0 * mc.std_error;
  }
  bool balls = true;
  std::string ball_detail;
  for (std::size_t d : {2u, 3u}) {
    const PointCloud p(std::vector<double>(d, 0.25), d);
    const double r = 0.3;
    const auto mc = empirical_volume(p, r, {500000, derive_seed(kSeed, d, "ball"), 1});
    const double exact = unit_ball_volume(d) * std::pow(r, static_cast<double>(d));
    const double z = std::abs(mc.value - exact) / mc.std_error;
    balls = balls && z <= 3.0;
    ball_detail += " d=" + std::to_string(d) + " z=" + fmt(z);
  }
  return {ok == 50 && balls,
          "1-d " + std::to_string(ok) + "/50 within 3 se (max z " + fmt(worst) + ");" + ball_detail};
}

Verdict criterion8() {
  GeneratorSpec g;
  g.ambient_dim = 2;
  g.intrinsic_dim = 1;
  g.seed = derive_seed(kSeed, 0, "segment");
  const auto seg = sample(g, 2000);
  const auto poly = fit_volume_polynomial(seg, 0.2, 20, {1000000, derive_seed(kSeed, 1, "volume"), 1});
  const auto seg_est = est_polyvol_dim(poly, 0.01, 2);

  const PointCloud point({0.5, 0.5}, 2);
  const auto ppoly = fit_volume_polynomial(point, 0.1, 20, {1000000, derive_seed(kSeed, 2, "volume"), 1});
  const auto point_est = est_polyvol_dim(ppoly, 0.01, 2);

  const bool ok = within(poly.coeffs[1], 2.0, 0.15) && within(poly.coeffs[2], kPi, 0.3) &&
                  seg_est.estimate.rounded == 1 && point_est.estimate.rounded == 0;
  return {ok, "segment theta1=" + fmt(poly.coeffs[1]) + " theta2=" + fmt(poly.coeffs[2]) +
                  " value=" + fmt(seg_est.estimate.value) + " verdict " +
                  std::to_string(seg_est.estimate.rounded) + "; point value=" +
                  fmt(point_est.estimate.value) + " verdict " +
                  std::to_string(point_est.estimate.rounded)};
}

Verdict criterion9() {
  const auto rep = cd_invariance_check(2500, 10, kSeed);
  return {rep.uniform_pass_rate >= 0.9 && rep.triangular_pass_rate >= 0.9,
          "uniform " + fmt(rep.uniform_pass_rate) + ", triangular " +
              fmt(rep.triangular_pass_rate)};
}

Verdict criterion10() {
  auto s = hypercube(3, 2, 4, {Method::BoxCount, Method::Capacity, Method::Correlation,
                               Method::Pointwise, Method::Volume, Method::PolyVolume});
  s.n = 1000;
  s.mc_samples = 20000;
  auto csv = [](const ExperimentSpec& spec) {
    std::ostringstream out;
    write_raw_csv(out, {run_experiment(spec)});
    return out.str();
  };
  const std::string a = csv(s);
  const std::string b = csv(s);
  s.threads = 3;
  const std::string c = csv(s);
  return {a == b && a == c, std::to_string(a.size()) + " bytes, rerun " +
                                (a == b ? "identical" : "differs") + ", 3 threads " +
                                (a == c ? "identical" : "differs")};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  // Hypercube rows for criteria 1 and 2: every (d, k) with k >= 3 for d = 3..7, plus (2,2).
  table1_rows.push_back(run_experiment(hypercube(2, 2, 20, kTable1)));
  for (std::size_t d = 3; d <= 7; ++d) {
    for (std::size_t k = 3; k <= d; ++k) {
      const bool full = (d == k && (d == 3 || d == 5));
      table1_rows.push_back(run_experiment(
          hypercube(d, k, 20, full ? kTable1 : std::vector<Method>{Method::BoxCount, Method::Capacity})));
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"hypercube means, desk scale", criterion1},
      {"box-counting and capacity underestimate", criterion2},
      {"manifold subset verdicts", criterion3},
      {"noise monotonicity", criterion4},
      {"volume/capacity sandwich", criterion5},
      {"accelerated queries equal brute force", criterion6},
      {"Monte-Carlo volume vs exact", criterion7},
      {"polynomial volume pipeline", criterion8},
      {"correlation dimension density invariance", criterion9},
      {"determinism of raw output", criterion10},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("[%s] criterion %zu: %s -- %s\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
