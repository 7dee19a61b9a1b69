#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "sff/models.hpp"
#include "sff/stats.hpp"

using namespace sff;

namespace {

constexpr double kPi = std::numbers::pi;

RmteParams rmte(int n, int l, double eps) {
  RmteParams p;
  p.N = n;
  p.L = l;
  p.eps = eps;
  return p;
}

std::complex<double> trace_power(const Eigen::MatrixXcd& u, int t) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  for (int i = 0; i < t; ++i) p = p * u;
  return p.trace();
}

double wrap(double phi) {
  phi = std::remainder(phi, 2.0 * kPi);
  if (phi >= kPi) phi -= 2.0 * kPi;
  return phi;
}

}  // namespace

TEST_CASE("build_rmte produces a unitary with the right structure") {
  const auto op = build_rmte(rmte(4, 2, 0.3), RngStream{5, 0});
  CHECK(op.dim() == 16);
  CHECK(op.unitarity_defect() < 1e-10);

  // Only row-wise unimodular factors distinguish it from the eps=0 draw.
  const auto bare = build_rmte(rmte(4, 2, 0.0), RngStream{5, 0});
  for (int r = 0; r < 16; ++r) {
    const std::complex<double> ratio = op.matrix(r, 0) / bare.matrix(r, 0);
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    for (int c = 1; c < 16; ++c) {
      CHECK(std::abs(op.matrix(r, c) - ratio * bare.matrix(r, c)) < 1e-12);
    }
  }
}

TEST_CASE("build_rmte equals the explicit three-factor product") {
  // Reconstruct D (U1 x U2) from the same stream, naive kron by hand.
  const RngStream rng{21, 4};
  const RmteParams params = rmte(2, 2, 0.3);
  const auto op = build_rmte(params, rng);

  auto eng = rng.engine();
  const Eigen::MatrixXcd u1 = sample_cue(2, eng);
  const Eigen::MatrixXcd u2 = sample_cue(2, eng);
  const Eigen::VectorXd xi = sample_coupling_phases(4, params.dist, eng);
  Eigen::MatrixXcd expected(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          expected(2 * i + k, 2 * j + l) =
              std::polar(1.0, 0.3 * xi(2 * i + k)) * u1(i, j) * u2(k, l);
        }
      }
    }
  }
  CHECK((op.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(op.matrix.trace() - expected.trace()) < 1e-12);
}

TEST_CASE("N=1 bipartite RMTE is a unimodular scalar") {
  const auto op = build_rmte(rmte(1, 2, 0.5), RngStream{3, 1});
  CHECK(op.dim() == 1);
  CHECK(std::abs(std::abs(op.matrix(0, 0)) - 1.0) < 1e-14);
}

TEST_CASE("memory cap is enforced with the limit in the message") {
  RmteParams p = rmte(100, 2, 0.0);
  CHECK_THROWS_WITH_AS(static_cast<void>(build_rmte(p, RngStream{1, 0})),
                       doctest::Contains("8192"), std::length_error);
}

TEST_CASE("uncoupled eigenphases are sums of factor eigenphases") {
  const RngStream rng{33, 2};
  const auto op = build_rmte(rmte(3, 2, 0.0), rng);
  const EigenphaseSet phases = eigenphases(op);

  auto eng = rng.engine();
  const Eigen::MatrixXcd u1 = sample_cue(3, eng);
  const Eigen::MatrixXcd u2 = sample_cue(3, eng);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e1(u1, false), e2(u2, false);
  std::vector<double> expected;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      expected.push_back(
          wrap(std::arg(e1.eigenvalues()(i)) + std::arg(e2.eigenvalues()(j))));
    }
  }
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 9; ++i) {
    CHECK(phases.phases(i) == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("tensor factorization of traces at zero coupling") {
  const RngStream rng{8, 0};
  const auto op = build_rmte(rmte(3, 2, 0.0), rng);
  auto eng = rng.engine();
  const Eigen::MatrixXcd u1 = sample_cue(3, eng);
  const Eigen::MatrixXcd u2 = sample_cue(3, eng);
  for (int t = 1; t <= 20; ++t) {
    const std::complex<double> whole = trace_power(op.matrix, t);
    const std::complex<double> parts = trace_power(u1, t) * trace_power(u2, t);
    CHECK(std::abs(whole - parts) < 1e-9 * std::max(1.0, std::abs(parts)));
  }
}

TEST_CASE("single rotor factor is unitary") {
  for (const int n : {2, 7, 24}) {
    const Eigen::MatrixXcd u = build_single_rotor(n, 9.7, 0.31, 0.12);
    Eigen::MatrixXcd g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gamma=0 rotor pair is an exact tensor product") {
  KickedRotorParams p;
  p.N = 5;
  p.gamma = 0.0;
  const BlochPhases b{0.21, 0.73, 0.39, 0.64};
  const auto op = build_kicked_rotor_pair(p, b);
  CHECK(op.unitarity_defect() < 1e-10);
  const Eigen::MatrixXcd ua = build_single_rotor(5, p.kA, b.theta_qA, b.theta_pA);
  const Eigen::MatrixXcd ub = build_single_rotor(5, p.kB, b.theta_qB, b.theta_pB);
  for (int t = 1; t <= 10; ++t) {
    const std::complex<double> whole = trace_power(op.matrix, t);
    const std::complex<double> parts = trace_power(ua, t) * trace_power(ub, t);
    CHECK(std::abs(whole - parts) < 1e-9 * std::max(1.0, std::abs(parts)));
  }
}

TEST_CASE("coupled rotor pair is unitary") {
  KickedRotorParams p;
  p.N = 6;
  p.gamma = 0.8;
  const auto op = build_kicked_rotor_pair(p, BlochPhases{0.1, 0.9, 0.3, 0.7});
  CHECK(op.dim() == 36);
  CHECK(op.unitarity_defect() < 1e-10);
}

TEST_CASE("eigenphase extraction: both solvers, sorted range, residual") {
  const auto op = build_rmte(rmte(5, 2, 0.4), RngStream{77, 0});
  const EigenphaseSet cayley = eigenphases(op, EigenSolver::CayleyHermitian);
  const EigenphaseSet qr = eigenphases(op, EigenSolver::DenseQr);
  REQUIRE(cayley.dim() == 25);
  REQUIRE(qr.dim() == 25);
  for (int i = 0; i < 25; ++i) {
    CHECK(cayley.phases(i) >= -kPi);
    CHECK(cayley.phases(i) < kPi);
    if (i > 0) CHECK(cayley.phases(i) >= cayley.phases(i - 1));
    CHECK(cayley.phases(i) == doctest::Approx(qr.phases(i)).epsilon(1e-9));
  }
  CHECK(cayley.unitarity_residual < 1e-8);
  CHECK(qr.unitarity_residual < 1e-8);
}

TEST_CASE("eigenphases reject a non-unitary operator") {
  FloquetOperator bad;
  bad.matrix = 2.0 * Eigen::MatrixXcd::Identity(4, 4);
  bad.provenance = "synthetic";
  CHECK_THROWS_AS(eigenphases(bad, EigenSolver::DenseQr), std::runtime_error);
  CHECK_THROWS_AS(eigenphases(bad, EigenSolver::CayleyHermitian),
                  std::runtime_error);
}

TEST_CASE("pooled eigenphases are uniform on the circle") {
  std::vector<double> pooled;
  for (int r = 0; r < 100; ++r) {
    const auto op = build_rmte(rmte(4, 2, 0.2), RngStream{123, uint64_t(r)});
    const EigenphaseSet ph = eigenphases(op);
    for (int i = 0; i < ph.dim(); ++i) pooled.push_back(ph.phases(i));
  }
  const double ks = ks_distance(
      pooled, [](double x) { return (x + kPi) / (2.0 * kPi); });
  CHECK(ks < 3.0 / std::sqrt(static_cast<double>(pooled.size())));
}
