#include "sff/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sff {

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller; avoids std::normal_distribution so byte-identical output is
// guaranteed across standard libraries.
double normal01(std::mt19937_64& eng) {
  double u1 = RngStream::uniform01(eng);
  while (u1 <= 0.0) u1 = RngStream::uniform01(eng);
  const double u2 = RngStream::uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 RngStream::engine() const {
  return std::mt19937_64(mix_seed(master_seed, stream_index));
}

PhaseDistribution PhaseDistribution::uniform_symmetric(double halfwidth) {
  if (!(halfwidth > 0.0)) {
    throw std::invalid_argument("PhaseDistribution: halfwidth must be > 0");
  }
  return PhaseDistribution(PhaseKind::UniformSymmetric, halfwidth);
}

PhaseDistribution PhaseDistribution::uniform() {
  return uniform_symmetric(kPi);
}

PhaseDistribution PhaseDistribution::arcsine_cos() {
  return PhaseDistribution(PhaseKind::ArcsineCos, 1.0);
}

PhaseDistribution PhaseDistribution::point_mass() {
  return PhaseDistribution(PhaseKind::PointMass, 0.0);
}

double PhaseDistribution::sigma2() const {
  switch (kind_) {
    case PhaseKind::UniformSymmetric:
      return halfwidth_ * halfwidth_ / 3.0;
    case PhaseKind::ArcsineCos:
      return 0.5;
    case PhaseKind::PointMass:
      return 0.0;
  }
  throw std::logic_error("unreachable");
}

double PhaseDistribution::sigma() const { return std::sqrt(sigma2()); }

std::complex<double> PhaseDistribution::characteristic_function(
    double eps) const {
  switch (kind_) {
    case PhaseKind::UniformSymmetric: {
      const double x = halfwidth_ * eps;
      if (std::abs(x) < 1e-8) {
        return {1.0 - x * x / 6.0, 0.0};
      }
      return {std::sin(x) / x, 0.0};
    }
    case PhaseKind::ArcsineCos:
      // <e^{i eps cos(eta)}> with eta uniform is the Bessel function J0.
      return {std::cyl_bessel_j(0.0, std::abs(eps)), 0.0};
    case PhaseKind::PointMass:
      return {1.0, 0.0};
  }
  throw std::logic_error("unreachable");
}

double PhaseDistribution::abs_chi(double eps) const {
  return std::abs(characteristic_function(eps));
}

double PhaseDistribution::sample(std::mt19937_64& eng) const {
  switch (kind_) {
    case PhaseKind::UniformSymmetric:
      return halfwidth_ * (2.0 * RngStream::uniform01(eng) - 1.0);
    case PhaseKind::ArcsineCos:
      return std::cos(kPi * (2.0 * RngStream::uniform01(eng) - 1.0));
    case PhaseKind::PointMass:
      return 0.0;
  }
  throw std::logic_error("unreachable");
}

const char* PhaseDistribution::name() const {
  switch (kind_) {
    case PhaseKind::UniformSymmetric:
      return "uniform";
    case PhaseKind::ArcsineCos:
      return "arcsine-cos";
    case PhaseKind::PointMass:
      return "point-mass";
  }
  throw std::logic_error("unreachable");
}

PhaseDistribution phase_distribution_from_name(const std::string& name) {
  if (name == "uniform") return PhaseDistribution::uniform();
  if (name == "arcsine-cos") return PhaseDistribution::arcsine_cos();
  if (name == "point-mass") return PhaseDistribution::point_mass();
  throw std::invalid_argument("unknown phase distribution: " + name);
}

Eigen::MatrixXcd sample_cue(int n, std::mt19937_64& eng) {
  if (n <= 0) throw std::invalid_argument("sample_cue: n must be positive");
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      g(i, j) = std::complex<double>(normal01(eng), normal01(eng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r =
      qr.matrixQR().triangularView<Eigen::Upper>();
  // Rescale columns so the factorization uses positive diagonal R; this makes
  // Q exactly Haar-distributed.
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

Eigen::MatrixXcd sample_cue(int n, const RngStream& rng) {
  auto eng = rng.engine();
  return sample_cue(n, eng);
}

Eigen::VectorXd sample_coupling_phases(std::int64_t total_dim,
                                       const PhaseDistribution& dist,
                                       std::mt19937_64& eng) {
  if (total_dim <= 0) {
    throw std::invalid_argument("sample_coupling_phases: dim must be > 0");
  }
  Eigen::VectorXd xi(total_dim);
  for (std::int64_t i = 0; i < total_dim; ++i) xi(i) = dist.sample(eng);
  return xi;
}

Eigen::VectorXd sample_coupling_phases(std::int64_t total_dim,
                                       const PhaseDistribution& dist,
                                       const RngStream& rng) {
  auto eng = rng.engine();
  return sample_coupling_phases(total_dim, dist, eng);
}

}  // namespace sff
