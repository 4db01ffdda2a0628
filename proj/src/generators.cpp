#include "intdim/generators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "intdim/errors.hpp"
#include "intdim/rng.hpp"

namespace intdim {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_offset(std::size_t d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, "affine-offset"));
  std::normal_distribution<double> gauss;
  std::vector<double> offset(d);
  for (auto& o : offset) o = gauss(rng);
  return offset;
}

double interval_violation(double v, double lo, double hi) {
  return std::max({0.0, lo - v, v - hi});
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Hypercube: return "hypercube";
    case GeneratorKind::Sphere: return "sphere";
    case GeneratorKind::Affine: return "affine";
    case GeneratorKind::SwissRoll: return "swiss_roll";
    case GeneratorKind::Helix: return "helix";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  for (auto kind : {GeneratorKind::Hypercube, GeneratorKind::Sphere, GeneratorKind::Affine,
                    GeneratorKind::SwissRoll, GeneratorKind::Helix}) {
    if (name == to_string(kind)) return kind;
  }
  throw InputError("unknown generator kind '" + std::string(name) +
                   "' (expected hypercube, sphere, affine, swiss_roll or helix)");
}

void GeneratorSpec::validate() const {
  const std::string d = std::to_string(ambient_dim);
  const std::string k = std::to_string(intrinsic_dim);
  if (intrinsic_dim < 1 || intrinsic_dim > ambient_dim) {
    throw InputError("generator needs 1 <= k <= d (got k=" + k + ", d=" + d + ")");
  }
  switch (kind) {
    case GeneratorKind::Sphere:
      if (intrinsic_dim + 1 != ambient_dim) {
        throw InputError("sphere requires k = d-1 (got k=" + k + ", d=" + d + ")");
      }
      if (!(radius > 0.0)) throw InputError("sphere radius must be positive");
      break;
    case GeneratorKind::SwissRoll:
      if (ambient_dim != 3 || intrinsic_dim != 2) {
        throw InputError("swiss_roll requires d = 3, k = 2 (got k=" + k + ", d=" + d + ")");
      }
      break;
    case GeneratorKind::Helix:
      if (ambient_dim != 3 || intrinsic_dim != 2) {
        throw InputError("helix requires d = 3, k = 2 (got k=" + k + ", d=" + d + ")");
      }
      if (!(pitch > 0.0) || !(turns > 0.0)) {
        throw InputError("helix pitch and turns must be positive");
      }
      break;
    case GeneratorKind::Hypercube:
    case GeneratorKind::Affine:
      break;
  }
}

std::vector<double> random_frame(std::size_t d, std::size_t k, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, "affine-frame"));
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  return {q.data(), q.data() + q.size()};
}

LabeledSample sample_with_params(const GeneratorSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1) throw InputError("sample size must be at least 1");
  const std::size_t d = spec.ambient_dim;
  const std::size_t k = spec.intrinsic_dim;

  Rng rng(derive_seed(spec.seed, 0, "points"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;

  std::vector<double> coords(n * d, 0.0);
  std::vector<double> params(n * k, 0.0);

  switch (spec.kind) {
    case GeneratorKind::Hypercube:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          params[i * k + j] = unit(rng);
          coords[i * d + j] = params[i * k + j];
        }
      }
      break;

    case GeneratorKind::Sphere:
      for (std::size_t i = 0; i < n; ++i) {
        double* x = &coords[i * d];
        double norm = 0.0;
        do {
          double s = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            x[j] = gauss(rng);
            s += x[j] * x[j];
          }
          norm = std::sqrt(s);
        } while (norm == 0.0);
        for (std::size_t j = 0; j < d; ++j) x[j] *= spec.radius / norm;
        // no chart is needed for the sphere; params record the first k coordinates
        std::copy(x, x + k, &params[i * k]);
      }
      break;

    case GeneratorKind::Affine: {
      const auto frame = random_frame(d, k, spec.seed);
      const auto offset = random_offset(d, spec.seed);
      for (std::size_t i = 0; i < n; ++i) {
        double* u = &params[i * k];
        for (std::size_t j = 0; j < k; ++j) u[j] = unit(rng);
        for (std::size_t r = 0; r < d; ++r) {
          double v = offset[r];
          for (std::size_t c = 0; c < k; ++c) v += frame[c * d + r] * u[c];
          coords[i * d + r] = v;
        }
      }
      break;
    }

    case GeneratorKind::SwissRoll: {
      std::uniform_real_distribution<double> angle(1.5 * kPi, 4.5 * kPi);
      std::uniform_real_distribution<double> height(0.0, 21.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = angle(rng);
        const double h = height(rng);
        params[i * 2] = t;
        params[i * 2 + 1] = h;
        coords[i * 3] = t * std::cos(t);
        coords[i * 3 + 1] = h;
        coords[i * 3 + 2] = t * std::sin(t);
      }
      break;
    }

    case GeneratorKind::Helix: {
      std::uniform_real_distribution<double> radial(-1.0, 1.0);
      std::uniform_real_distribution<double> angle(0.0, spec.turns * 2.0 * kPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = radial(rng);
        const double v = angle(rng);
        params[i * 2] = u;
        params[i * 2 + 1] = v;
        coords[i * 3] = u * std::cos(v);
        coords[i * 3 + 1] = u * std::sin(v);
        coords[i * 3 + 2] = spec.pitch * v;
      }
      break;
    }
  }
  return {PointCloud(std::move(coords), d), std::move(params)};
}

PointCloud sample(const GeneratorSpec& spec, std::size_t n) {
  return sample_with_params(spec, n).cloud;
}

PointCloud add_noise(const PointCloud& cloud, NoiseSpec noise, std::uint64_t seed) {
  if (!(noise.sigma >= 0.0)) throw InputError("noise sigma must be nonnegative");
  if (noise.sigma == 0.0) return cloud;
  Rng rng(derive_seed(seed, 0, "noise"));
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  std::vector<double> coords = cloud.coords();
  for (auto& c : coords) c += gauss(rng);
  return PointCloud(std::move(coords), cloud.dim());
}

double support_residual(const GeneratorSpec& spec, const PointCloud& cloud) {
  spec.validate();
  if (cloud.dim() != spec.ambient_dim) throw InputError("cloud dimension does not match spec");
  const std::size_t d = spec.ambient_dim;
  const std::size_t k = spec.intrinsic_dim;
  std::vector<double> frame;
  std::vector<double> offset;
  if (spec.kind == GeneratorKind::Affine) {
    frame = random_frame(d, k, spec.seed);
    offset = random_offset(d, spec.seed);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    double res = 0.0;
    switch (spec.kind) {
      case GeneratorKind::Hypercube:
        for (std::size_t j = 0; j < d; ++j) {
          res = std::max(res, j < k ? interval_violation(x[j], 0.0, 1.0) : std::abs(x[j]));
        }
        break;
      case GeneratorKind::Sphere: {
        double s = 0.0;
        for (double c : x) s += c * c;
        res = std::abs(std::sqrt(s) - spec.radius);
        break;
      }
      case GeneratorKind::Affine: {
        // preimage by projection onto the frame, then reconstruction error
        std::vector<double> u(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) {
          for (std::size_t r = 0; r < d; ++r) u[c] += frame[c * d + r] * (x[r] - offset[r]);
          res = std::max(res, interval_violation(u[c], 0.0, 1.0));
        }
        for (std::size_t r = 0; r < d; ++r) {
          double v = offset[r];
          for (std::size_t c = 0; c < k; ++c) v += frame[c * d + r] * u[c];
          res = std::max(res, std::abs(v - x[r]));
        }
        break;
      }
      case GeneratorKind::SwissRoll: {
        const double t = std::hypot(x[0], x[2]);
        res = std::max({interval_violation(t, 1.5 * kPi, 4.5 * kPi),
                        interval_violation(x[1], 0.0, 21.0), std::abs(x[0] - t * std::cos(t)),
                        std::abs(x[2] - t * std::sin(t))});
        break;
      }
      case GeneratorKind::Helix: {
        const double v = x[2] / spec.pitch;
        const double u = x[0] * std::cos(v) + x[1] * std::sin(v);
        res = std::max({interval_violation(v, 0.0, spec.turns * 2.0 * kPi),
                        interval_violation(u, -1.0, 1.0),
                        std::abs(x[0] * std::sin(v) - x[1] * std::cos(v))});
        break;
      }
    }
    worst = std::max(worst, res);
  }
  return worst;
}

}  // namespace intdim
