#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "sff/rng.hpp"

using namespace sff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sample_cue is unitary to 1e-12") {
  for (const int n : {1, 5, 16, 33}) {
    const Eigen::MatrixXcd u = sample_cue(n, RngStream{7, 0});
    Eigen::MatrixXcd g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    CHECK(g.cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(std::abs(std::abs(sample_cue(1, RngStream{1, 2})(0, 0)) - 1.0) <
        1e-14);
  CHECK_THROWS_AS(sample_cue(0, RngStream{1, 0}), std::invalid_argument);
}

TEST_CASE("sample_cue eigenvalues lie on the unit circle") {
  const Eigen::MatrixXcd u = sample_cue(16, RngStream{11, 3});
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
  CHECK(es.eigenvalues().cwiseAbs().maxCoeff() ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sample_cue matches Haar first and second moments") {
  // <|u_00|^2> = 1/n and <|u_00|^2 |u_01|^2> = 1/(n(n+1)) for Haar.
  const int n = 8;
  const int samples = 100000;
  auto eng = RngStream{42, 0}.engine();
  double s1 = 0.0, s1sq = 0.0, s2 = 0.0, s2sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::MatrixXcd u = sample_cue(n, eng);
    const double a = std::norm(u(0, 0));
    const double b = std::norm(u(0, 1));
    s1 += a;
    s1sq += a * a;
    s2 += a * b;
    s2sq += a * a * b * b;
  }
  const double m1 = s1 / samples;
  const double se1 = std::sqrt((s1sq / samples - m1 * m1) / samples);
  CHECK(std::abs(m1 - 1.0 / n) < 3.0 * se1);
  const double m2 = s2 / samples;
  const double se2 = std::sqrt((s2sq / samples - m2 * m2) / samples);
  CHECK(std::abs(m2 - 1.0 / (n * (n + 1.0))) < 3.0 * se2);
}

TEST_CASE("streams are deterministic and index-decorrelated") {
  const Eigen::MatrixXcd a = sample_cue(6, RngStream{99, 5});
  const Eigen::MatrixXcd b = sample_cue(6, RngStream{99, 5});
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXcd c = sample_cue(6, RngStream{99, 6});
  CHECK((a - c).cwiseAbs().maxCoeff() > 1e-3);
  const Eigen::MatrixXcd d = sample_cue(6, RngStream{100, 5});
  CHECK((a - d).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("phase distribution variances") {
  CHECK(PhaseDistribution::uniform().sigma2() ==
        doctest::Approx(kPi * kPi / 3.0).epsilon(1e-14));
  CHECK(PhaseDistribution::arcsine_cos().sigma2() == 0.5);
  CHECK(PhaseDistribution::point_mass().sigma2() == 0.0);
  CHECK(PhaseDistribution::uniform_symmetric(0.5).sigma2() ==
        doctest::Approx(0.25 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(PhaseDistribution::uniform_symmetric(0.0),
                  std::invalid_argument);
}

TEST_CASE("sampled phases match mean and variance") {
  const std::int64_t n = 1000000;
  for (const auto& dist :
       {PhaseDistribution::uniform(), PhaseDistribution::arcsine_cos()}) {
    const Eigen::VectorXd xi =
        sample_coupling_phases(n, dist, RngStream{3, 0});
    const double mean = xi.mean();
    const double var = (xi.array() - mean).square().sum() / (n - 1);
    CHECK(std::abs(mean) < 4.0 * dist.sigma() / std::sqrt(double(n)));
    CHECK(var == doctest::Approx(dist.sigma2()).epsilon(0.01));
  }
  const Eigen::VectorXd zero =
      sample_coupling_phases(100, PhaseDistribution::point_mass(),
                             RngStream{3, 0});
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("characteristic function closed forms") {
  const auto uniform = PhaseDistribution::uniform();
  const auto arcsine = PhaseDistribution::arcsine_cos();
  CHECK(uniform.characteristic_function(0.0).real() == 1.0);
  CHECK(arcsine.characteristic_function(0.0).real() == 1.0);
  CHECK(PhaseDistribution::point_mass().characteristic_function(3.0) ==
        std::complex<double>(1.0, 0.0));
  CHECK(std::abs(uniform.characteristic_function(1.0)) < 1e-15);
  CHECK(uniform.characteristic_function(0.5).real() ==
        doctest::Approx(std::sin(kPi * 0.5) / (kPi * 0.5)).epsilon(1e-14));

  // Quadrature of the defining integral <e^{i eps xi}> as an independent
  // oracle for both laws.
  auto quad_uniform = [&](double eps) {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double xi = -kPi + (i + 0.5) * 2.0 * kPi / n;
      s += std::cos(eps * xi);
    }
    return s / n;
  };
  auto quad_arcsine = [&](double eps) {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double eta = -kPi + (i + 0.5) * 2.0 * kPi / n;
      s += std::cos(eps * std::cos(eta));
    }
    return s / n;
  };
  for (const double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(uniform.characteristic_function(eps).real() ==
          doctest::Approx(quad_uniform(eps)).epsilon(1e-9));
    CHECK(arcsine.characteristic_function(eps).real() ==
          doctest::Approx(quad_arcsine(eps)).epsilon(1e-9));
    CHECK(uniform.abs_chi(eps) <= 1.0 + 1e-15);
    CHECK(arcsine.abs_chi(eps) <= 1.0 + 1e-15);
  }
}

TEST_CASE("empirical characteristic function matches the analytic one") {
  const std::int64_t n = 100000;
  for (const auto& dist :
       {PhaseDistribution::uniform(), PhaseDistribution::arcsine_cos()}) {
    const Eigen::VectorXd xi =
        sample_coupling_phases(n, dist, RngStream{17, 1});
    for (const double eps : {0.1, 0.5, 1.0, 2.0}) {
      std::complex<double> emp = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        emp += std::polar(1.0, eps * xi(i));
      }
      emp /= static_cast<double>(n);
      CHECK(std::abs(emp - dist.characteristic_function(eps)) <
            4.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("distribution names round-trip") {
  for (const char* name : {"uniform", "arcsine-cos", "point-mass"}) {
    CHECK(phase_distribution_from_name(name).name() == std::string(name));
  }
  CHECK_THROWS_AS(phase_distribution_from_name("gauss"),
                  std::invalid_argument);
}
