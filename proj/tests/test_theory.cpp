#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sff/theory.hpp"

using namespace sff;

namespace {

constexpr double kPi = std::numbers::pi;

TransitionParams uniform_params(int n, int l, double eps) {
  TransitionParams p;
  p.N = n;
  p.L = l;
  p.eps = eps;
  p.dist = PhaseDistribution::uniform();
  return p;
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

TEST_CASE("sff_cue ramp and plateau") {
  CHECK(sff_cue(12, 9) == 9.0);
  CHECK(sff_cue(0, 9) == 0.0);
  CHECK(sff_cue(9, 9) == 9.0);
  CHECK(sff_cue(5, 9) == 5.0);
  CHECK_THROWS_AS(sff_cue(3, 0), std::invalid_argument);
}

TEST_CASE("sff_prediction limits") {
  const auto p0 = uniform_params(12, 2, 0.0);  // chi = 1
  const auto p1 = uniform_params(12, 2, 1.0);  // chi = 0 for uniform phases
  for (const std::int64_t t : {1, 5, 12, 40, 200}) {
    CHECK(sff_prediction(t, p0, PredictionMode::ShortTime) ==
          doctest::Approx(double(t) * double(t)).epsilon(1e-14));
    CHECK(sff_prediction(t, p0, PredictionMode::Extrapolated) ==
          doctest::Approx(sff_cue(t, 12) * sff_cue(t, 12)).epsilon(1e-14));
    CHECK(sff_prediction(t, p1, PredictionMode::ShortTime) ==
          doctest::Approx(double(t)).epsilon(1e-14));
    CHECK(sff_prediction(t, p1, PredictionMode::Extrapolated) ==
          doctest::Approx(sff_cue(t, 144)).epsilon(1e-14));
  }
}

TEST_CASE("sff_prediction matches an independent transcription") {
  // Spelled out from scratch, N=50, L=2, uniform phases, eps=0.02, t=40.
  const double eps = 0.02;
  const double chi = std::sin(kPi * eps) / (kPi * eps);
  const double x = std::pow(chi, 80);  // |chi|^{2t}
  const double expected_short = x * 40.0 * 40.0 + (1.0 - x) * 40.0;
  const double kn = std::min<double>(40.0, 50.0);
  const double knl = std::min<double>(40.0, 2500.0);
  const double expected_extrap = x * kn * kn + (1.0 - x) * knl;
  const auto p = uniform_params(50, 2, eps);
  CHECK(sff_prediction(40, p, PredictionMode::ShortTime) ==
        doctest::Approx(expected_short).epsilon(1e-12));
  CHECK(sff_prediction(40, p, PredictionMode::Extrapolated) ==
        doctest::Approx(expected_extrap).epsilon(1e-12));
}

TEST_CASE("extrapolated prediction is a convex combination") {
  const auto p = uniform_params(16, 2, 0.07);
  for (std::int64_t t = 1; t <= 1200; t += 7) {
    const double v = sff_prediction(t, p, PredictionMode::Extrapolated);
    const double a = std::pow(sff_cue(t, 16), 2);
    const double b = sff_cue(t, 256);
    CHECK(v >= std::min(a, b) - 1e-12);
    CHECK(v <= std::max(a, b) + 1e-12);
  }
}

TEST_CASE("scaled prediction") {
  CHECK(sff_prediction_scaled(0.4, 0.0) == 1.0);
  CHECK(sff_prediction_scaled(0.4, 1e4) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(sff_prediction_scaled(3.0, 1e4) == 1.0);
  const double g2 = 16.0;
  CHECK(sff_prediction_scaled(0.25, 4.0) ==
        doctest::Approx(std::exp(-g2 * 0.25) +
                        (1.0 - std::exp(-g2 * 0.25)) * 0.25)
            .epsilon(1e-14));
  CHECK(sff_prediction_scaled(0.25, 4.0) ==
        doctest::Approx(0.26372).epsilon(1e-4));
}

TEST_CASE("scaled prediction is the large-N limit of the extrapolated one") {
  // Fixed Gamma via eps = Gamma sqrt(3) / (pi N); CLT error |chi^{2t} -
  // e^{-Gamma^2 tau}| shrinks with N.
  const double gamma = 4.0;
  for (const int n : {16, 32}) {
    const double eps = gamma * std::sqrt(3.0) / (kPi * n);
    const auto p = uniform_params(n, 2, eps);
    const double dim = double(n) * n;
    double worst = 0.0;
    for (double tau : {0.1, 0.3, 0.6, 0.9, 1.5}) {
      const auto t = static_cast<std::int64_t>(std::llround(tau * dim));
      const double lhs = sff_prediction(t, p, PredictionMode::Extrapolated) / dim;
      const double rhs = sff_prediction_scaled(double(t) / dim, gamma);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    // CLT convergence: coarse bound at N=16, tight at N=32.
    CHECK(worst < (n == 16 ? 0.02 : 0.006));
  }
}

TEST_CASE("a_k closed form reference values and sum rules") {
  CHECK(a_k_closed_form(1, 0, 5) == 4.0);
  CHECK(a_k_closed_form(1, 1, 5) == 1.0);
  CHECK(a_k_closed_form(2, 0, 3) == 13.0);
  CHECK(a_k_closed_form(2, 1, 3) == 4.0);
  CHECK(a_k_closed_form(2, 2, 3) == 1.0);
  for (int m = 1; m <= 5; ++m) {
    for (std::int64_t t = 1; t <= 12; ++t) {
      double sum = 0.0;
      for (int k = 0; k <= m; ++k) sum += a_k_closed_form(m, k, t);
      CHECK(sum == factorial(m) * std::pow(double(t), m));
      CHECK(a_k_closed_form(m, m, t) == 1.0);
    }
  }
  CHECK_THROWS_AS(a_k_closed_form(2, 3, 1), std::invalid_argument);
}

TEST_CASE("moment prediction limits") {
  const auto p0 = uniform_params(24, 2, 0.0);
  const auto p1 = uniform_params(24, 2, 1.0);
  for (int m = 1; m <= 3; ++m) {
    for (const std::int64_t t : {2, 5, 9}) {
      // Uncoupled: K_m = (m! t^m)^2, the square of the CUE(N) moment.
      const double cue_m = factorial(m) * std::pow(double(t), m);
      CHECK(moment_prediction(m, t, p0, PredictionMode::ShortTime) ==
            doctest::Approx(cue_m * cue_m).epsilon(1e-12));
      // chi = 0: only k = m survives and A_m = 1.
      CHECK(moment_prediction(m, t, p1, PredictionMode::ShortTime) ==
            doctest::Approx(cue_m).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(
      moment_prediction(4, 3, p0, PredictionMode::Extrapolated),
      std::invalid_argument);
}

TEST_CASE("m=2 short-time moment expands to the quoted polynomial") {
  // K_2 = 2t^2 + (4t^3-4t^2) x + (4t^4-4t^3+2t^2) x^2 with x = |chi|^{2t}.
  for (std::int64_t t = 1; t <= 8; ++t) {
    const double td = static_cast<double>(t);
    const std::vector<double> expected = {
        2 * td * td, 4 * td * td * td - 4 * td * td,
        4 * td * td * td * td - 4 * td * td * td + 2 * td * td};
    // Coefficient of x^j is 2 t^2 A_{2-j}(t).
    for (int j = 0; j <= 2; ++j) {
      CHECK(2.0 * td * td * a_k_closed_form(2, 2 - j, t) == expected[j]);
    }
  }
}

TEST_CASE("extrapolated moments agree with short-time ones before t_SH") {
  const auto p = uniform_params(24, 2, 0.08);
  for (int m = 1; m <= 3; ++m) {
    for (std::int64_t t = 1; t <= 24; ++t) {
      CHECK(moment_prediction(m, t, p, PredictionMode::Extrapolated) ==
            doctest::Approx(moment_prediction(m, t, p,
                                              PredictionMode::ShortTime))
                .epsilon(1e-12));
    }
  }
  CHECK(moment_prediction(1, 40, p, PredictionMode::Extrapolated) ==
        doctest::Approx(sff_prediction(40, p, PredictionMode::Extrapolated))
            .epsilon(1e-14));
}

TEST_CASE("lambert_w0") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
  for (double w = -0.995; w <= 4.0; w += 0.05) {
    const double x = w * std::exp(w);
    CHECK(lambert_w0(x) == doctest::Approx(w).epsilon(1e-11));
  }
  CHECK_THROWS_AS(lambert_w0(-1.0), std::invalid_argument);
}

TEST_CASE("thouless_time_lambert satisfies its defining equation") {
  CHECK(thouless_time_lambert(3.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-6));
  for (const double gamma : {2.0, 3.0, 5.0, 8.0}) {
    const double tau = thouless_time_lambert(gamma, 0.005);
    const double resid =
        (1.0 - tau) * std::exp(-gamma * gamma * tau) - 0.005;
    CHECK(std::abs(resid) < 1e-10);
  }
  double prev = 1.0;
  for (double gamma = 1.0; gamma <= 10.0; gamma += 0.25) {
    const double tau = thouless_time_lambert(gamma, 0.01);
    CHECK(tau < prev);
    prev = tau;
  }
  CHECK_THROWS_AS(thouless_time_lambert(3.0, 0.0), std::invalid_argument);
}

TEST_CASE("absolute Thouless estimate") {
  const auto p = uniform_params(50, 2, 0.1);
  // Delta = N^L makes the log form vanish.
  CHECK(thouless_time_absolute(p, 2500.0).log_form ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Doubling L doubles the large-N form.
  auto p3 = p;
  p3.L = 4;
  CHECK(thouless_time_absolute(p3, 1.0).large_n ==
        doctest::Approx(2.0 * thouless_time_absolute(p, 1.0).large_n)
            .epsilon(1e-12));
  // Cross-check against a numeric solve of (N^2 - t)|chi|^{2t} = Delta.
  const double t_th = thouless_time_absolute(p, 1.0).log_form;
  const double chi = p.abs_chi();
  auto f = [&](double t) {
    return (2500.0 - t) * std::pow(chi, 2.0 * t) - 1.0;
  };
  double lo = 1.0, hi = 2500.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  CHECK(t_th == doctest::Approx(lo).epsilon(0.05));
  CHECK_THROWS_AS(thouless_time_absolute(uniform_params(50, 2, 0.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("ehrenfest estimate") {
  CHECK(ehrenfest_estimate(50, 9.7, 10.5) ==
        doctest::Approx(std::log(50.0) / (2.0 * std::log(25.4625)))
            .epsilon(1e-12));
  CHECK(ehrenfest_estimate(50, 9.7, 10.5) == doctest::Approx(0.604).epsilon(1e-3));
  CHECK(ehrenfest_estimate(1, 9.7, 10.5) == 0.0);
  for (int n = 2; n <= 1000000; n *= 10) {
    CHECK(ehrenfest_estimate(n, 9.7, 10.5) < n);
  }
  CHECK_THROWS_AS(ehrenfest_estimate(50, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("transition parameter") {
  CHECK(transition_parameter(uniform_params(8, 2, 0.0)).exact == 0.0);
  const auto p = uniform_params(16, 2, 0.003);
  const auto lam = transition_parameter(p);
  // Small eps: Lambda = N^L eps^2 / 12 for uniform phases.
  const double small = 256.0 * 0.003 * 0.003 / 12.0;
  CHECK(lam.small_eps == doctest::Approx(small).epsilon(1e-12));
  CHECK(lam.exact == doctest::Approx(small).epsilon(1e-4));
  const double g = p.gamma_scaled();
  CHECK(lam.small_eps ==
        doctest::Approx(g * g / (4.0 * kPi * kPi)).epsilon(1e-14));
}

TEST_CASE("perturbative closed form") {
  CHECK(sff_perturbative(0.0, 3.0) == 1.0);
  CHECK(sff_perturbative(1.4, 0.0) == 1.0);
  // Minimum at tau_pert = 1/sqrt(2), depth 2 pi sqrt(Lambda/(2e)).
  const double gamma = 0.5;
  const double lambda = gamma * gamma / (4.0 * kPi * kPi);
  double best_tau = 0.0, best = 2.0;
  for (int i = 0; i <= 40000; ++i) {
    const double tau = 3.0 * i / 40000.0;  // tau, so tau_pert = gamma tau
    const double v = sff_perturbative(tau, gamma);
    if (v < best) {
      best = v;
      best_tau = gamma * tau;
    }
  }
  CHECK(best_tau == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(best == doctest::Approx(1.0 - 2.0 * kPi *
                                          std::sqrt(lambda / (2.0 * std::exp(1.0))))
                    .epsilon(1e-6));
}

TEST_CASE("perturbative quadrature oracle matches the closed form") {
  CHECK(perturb_integral_numeric(0.0, 0.01) == 0.0);
  for (const double tp : {0.3, 0.7, 1.0, 2.0}) {
    const double quad = perturb_integral_numeric(tp, 0.01);
    const double closed = -2.0 * kPi * std::sqrt(0.01) * tp * std::exp(-tp * tp);
    CHECK(std::abs(quad - closed) < 1e-7);
    CHECK(quad <= 0.0);
  }
}

TEST_CASE("perturbative and scaled forms agree at small Gamma") {
  for (const double gamma : {0.1, 0.2, 0.3}) {
    for (double dtau = 0.0; dtau <= 0.1; dtau += 0.01) {
      const double a = sff_prediction_scaled(dtau, gamma);
      const double b = sff_perturbative(dtau, gamma);
      // The leading mismatch is the second-order term Gamma^2 tau^2, which
      // touches 0.01 Gamma^2 right at the window edge; allow 20% headroom.
      CHECK(std::abs(a - b) < 0.012 * gamma * gamma + 1e-12);
    }
  }
}
