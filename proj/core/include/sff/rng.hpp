#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace sff {

/// Deterministic per-realization random stream.
///
/// Streams are identified by (master_seed, stream_index); the engine seed is a
/// counter-based hash of the pair, so realization k produces the same draws no
/// matter which worker executes it or in which order.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  std::mt19937_64 engine() const;

  /// Uniform double in [0, 1) with 53 random bits.
  static double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }
};

/// splitmix64 finalizer; used to decorrelate (seed, index) pairs.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index);

enum class PhaseKind {
  UniformSymmetric,  // uniform on [-halfwidth, halfwidth]
  ArcsineCos,        // cos(eta), eta uniform on [-pi, pi]
  PointMass,         // degenerate at 0
};

/// Law of the random coupling phases: sampler, variance, characteristic
/// function. All supported laws are symmetric about zero.
class PhaseDistribution {
 public:
  static PhaseDistribution uniform_symmetric(double halfwidth);
  static PhaseDistribution uniform();  // halfwidth pi
  static PhaseDistribution arcsine_cos();
  static PhaseDistribution point_mass();

  PhaseKind kind() const { return kind_; }
  double halfwidth() const { return halfwidth_; }

  /// Analytic variance of the law.
  double sigma2() const;
  double sigma() const;

  /// <exp(i eps xi)>; real for the symmetric laws implemented here.
  std::complex<double> characteristic_function(double eps) const;
  /// |characteristic_function|, the quantity entering every prediction.
  double abs_chi(double eps) const;

  double sample(std::mt19937_64& eng) const;

  const char* name() const;

 private:
  PhaseDistribution(PhaseKind kind, double halfwidth)
      : kind_(kind), halfwidth_(halfwidth) {}

  PhaseKind kind_;
  double halfwidth_;
};

PhaseDistribution phase_distribution_from_name(const std::string& name);

/// Haar-random unitary from U(n): QR of a complex Ginibre matrix with the
/// R-diagonal phase correction (plain QR alone is not Haar).
Eigen::MatrixXcd sample_cue(int n, const RngStream& rng);
Eigen::MatrixXcd sample_cue(int n, std::mt19937_64& eng);

/// i.i.d. coupling phases xi of length total_dim.
Eigen::VectorXd sample_coupling_phases(std::int64_t total_dim,
                                       const PhaseDistribution& dist,
                                       const RngStream& rng);
Eigen::VectorXd sample_coupling_phases(std::int64_t total_dim,
                                       const PhaseDistribution& dist,
                                       std::mt19937_64& eng);

}  // namespace sff
