#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "intdim/point_cloud.hpp"

namespace intdim {

enum class GeneratorKind { Hypercube, Sphere, Affine, SwissRoll, Helix };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

/**
 * Ground-truth sets, all sampled uniformly in parameter space:
 *  - Hypercube: [0,1]^k x {0}^(d-k).
 *  - Sphere:    unit (d-1)-sphere (k = d-1), via normalized Gaussian vectors.
 *  - Affine:    [0,1]^k mapped by a seeded random orthonormal d x k frame plus a
 *               seeded N(0,1) offset. k = d gives a rotated, shifted cube.
 *  - SwissRoll: (t cos t, h, t sin t), t ~ U[1.5pi, 4.5pi], h ~ U[0, 21]; d = 3, k = 2.
 *  - Helix:     helicoid (u cos v, u sin v, pitch*v), u ~ U[-1, 1],
 *               v ~ U[0, turns*2pi]; d = 3, k = 2.
 */
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Hypercube;
  std::size_t ambient_dim = 2;
  std::size_t intrinsic_dim = 2;
  std::uint64_t seed = 0;
  double radius = 1.0;  // sphere
  double pitch = 0.5;   // helix
  double turns = 2.0;   // helix

  /// Throws InputError naming the violated shape constraint.
  void validate() const;
};

struct NoiseSpec {
  double sigma = 0.0;
};

/// Sample plus the parameter-space preimage of every point (n x intrinsic_dim).
struct LabeledSample {
  PointCloud cloud;
  std::vector<double> params;
};

PointCloud sample(const GeneratorSpec& spec, std::size_t n);
LabeledSample sample_with_params(const GeneratorSpec& spec, std::size_t n);

/// Each coordinate perturbed by independent N(0, sigma^2). sigma = 0 returns a copy.
PointCloud add_noise(const PointCloud& cloud, NoiseSpec noise, std::uint64_t seed);

/// Orthonormal d x k frame (column-major) from the QR factorization of a seeded
/// Gaussian matrix; the same frame `sample` uses for GeneratorKind::Affine.
std::vector<double> random_frame(std::size_t d, std::size_t k, std::uint64_t seed);

/// Largest violation of the kind's defining equations over all points.
double support_residual(const GeneratorSpec& spec, const PointCloud& cloud);

}  // namespace intdim
