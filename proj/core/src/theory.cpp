#include "sff/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sff {

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Derangement count !n.
double subfactorial(int n) {
  if (n < 0) throw std::invalid_argument("subfactorial: negative argument");
  double a = 1.0, b = 0.0;  // !0, !1
  if (n == 0) return a;
  if (n == 1) return b;
  for (int i = 2; i <= n; ++i) {
    const double c = (i - 1) * (a + b);
    a = b;
    b = c;
  }
  return b;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double pow_i(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double sff_cue(std::int64_t t, std::int64_t dim) {
  if (dim <= 0) throw std::invalid_argument("sff_cue: dim must be positive");
  if (t < 0) t = -t;  // K(-t) = K(t)
  return static_cast<double>(std::min(t, dim));
}

std::int64_t TransitionParams::total_dim() const {
  if (N <= 0 || L <= 0) {
    throw std::invalid_argument("TransitionParams: N and L must be positive");
  }
  std::int64_t d = 1;
  for (int i = 0; i < L; ++i) d *= N;
  return d;
}

double TransitionParams::gamma_scaled() const {
  return dist.sigma() * eps * std::pow(static_cast<double>(N), 0.5 * L);
}

double sff_prediction(std::int64_t t, const TransitionParams& p,
                      PredictionMode mode) {
  if (t < 1) throw std::invalid_argument("sff_prediction: t must be >= 1");
  const double chi = p.abs_chi();
  const double x = std::pow(chi * chi, static_cast<double>(t));
  const std::int64_t nl = p.total_dim();
  switch (mode) {
    case PredictionMode::ShortTime:
      return x * pow_i(static_cast<double>(t), p.L) +
             (1.0 - x) * static_cast<double>(t);
    case PredictionMode::Extrapolated:
      return x * pow_i(sff_cue(t, p.N), p.L) + (1.0 - x) * sff_cue(t, nl);
  }
  throw std::logic_error("unreachable");
}

double sff_prediction_scaled(double tau, double gamma_scaled) {
  if (tau < 0) throw std::invalid_argument("sff_prediction_scaled: tau < 0");
  const double g2 = gamma_scaled * gamma_scaled;
  const double decay = std::exp(-g2 * tau);
  return decay + (1.0 - decay) * std::min(tau, 1.0);
}

double a_k_closed_form(int m, int k, std::int64_t t) {
  if (m < 1 || k < 0 || k > m || t < 1) {
    throw std::invalid_argument("a_k_closed_form: invalid arguments");
  }
  double sum = 0.0;
  for (int l = k; l <= m; ++l) {
    sum += binom(m, l) * binom(l, k) * subfactorial(m - l) *
           pow_i(static_cast<double>(t), m - l) *
           pow_i(static_cast<double>(t - 1), l - k);
  }
  return sum;
}

double moment_prediction(int m, std::int64_t t, const TransitionParams& p,
                         PredictionMode mode) {
  if (m < 1) throw std::invalid_argument("moment_prediction: m must be >= 1");
  if (t < 1) throw std::invalid_argument("moment_prediction: t must be >= 1");
  if (p.L != 2) {
    throw std::invalid_argument(
        "moment_prediction: closed forms are bipartite (L = 2) only");
  }
  const double chi = p.abs_chi();
  const double x = std::pow(chi * chi, static_cast<double>(t));

  if (mode == PredictionMode::ShortTime) {
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) {
      sum += a_k_closed_form(m, k, t) * pow_i(x, m - k);
    }
    return factorial(m) * pow_i(static_cast<double>(t), m) * sum;
  }

  // Extrapolated: saturate each channel at its own Heisenberg time.
  const double kf = sff_cue(t, p.total_dim());
  const double kn = sff_cue(t, p.N);
  const double y = 1.0 - x;
  switch (m) {
    case 1:
      return x * kn * kn + y * kf;
    case 2:
      return 2.0 * kf * kf * y * y + 4.0 * pow_i(kn, 4) * x * x +
             4.0 * kf * kn * kn * x * y;
    case 3:
      return 6.0 * pow_i(kf, 3) * pow_i(y, 3) +
             36.0 * pow_i(kn, 6) * pow_i(x, 3) +
             18.0 * kf * kf * kn * kn * x * y * y +
             36.0 * kf * pow_i(kn, 4) * x * x * y;
    default:
      throw std::invalid_argument(
          "moment_prediction: extrapolated form implemented for m <= 3");
  }
}

double lambert_w0(double x) {
  constexpr double kInvE = 0.36787944117144233;
  if (x < -kInvE) {
    throw std::invalid_argument("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  double w = (x > -0.3) ? std::log1p(x) : -1.0 + std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 1e-13 * (1.0 + std::abs(w))) return w;
  }
  throw std::runtime_error("lambert_w0: Halley iteration failed to converge");
}

double thouless_time_lambert(double gamma_scaled, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("thouless_time_lambert: delta must be > 0");
  }
  const double g2 = gamma_scaled * gamma_scaled;
  if (g2 == 0.0) return delta < 1.0 ? 1.0 - delta : 0.0;
  const double arg = delta * g2 * std::exp(g2);
  const double tau = 1.0 - lambert_w0(arg) / g2;
  return std::max(tau, 0.0);
}

ThoulessAbsolute thouless_time_absolute(const TransitionParams& p,
                                        double delta_abs) {
  const double chi = p.abs_chi();
  if (!(chi > 0.0) || chi >= 1.0) {
    throw std::invalid_argument(
        "thouless_time_absolute: requires 0 < |chi| < 1");
  }
  ThoulessAbsolute r;
  const double lnchi = std::log(chi);
  r.log_form =
      (std::log(delta_abs) - p.L * std::log(static_cast<double>(p.N))) /
      (2.0 * lnchi);
  r.large_n = p.L * std::log(static_cast<double>(p.N)) / (2.0 * -lnchi);
  return r;
}

double ehrenfest_estimate(int N, double kA, double kB) {
  if (N < 1 || kA * kB <= 4.0) {
    throw std::invalid_argument("ehrenfest_estimate: invalid parameters");
  }
  return std::log(static_cast<double>(N)) / (2.0 * std::log(kA * kB / 4.0));
}

TransitionParameter transition_parameter(const TransitionParams& p) {
  const double chi = p.abs_chi();
  const double nl = static_cast<double>(p.total_dim());
  TransitionParameter r;
  r.exact = nl * (1.0 - chi * chi) / (4.0 * kPi * kPi);
  const double g = p.gamma_scaled();
  r.small_eps = g * g / (4.0 * kPi * kPi);
  return r;
}

double nu_tilde_sq_finite_n(const TransitionParams& p) {
  const double chi = p.abs_chi();
  const double nl = static_cast<double>(p.total_dim());
  const double shrink = 1.0 - std::pow(2.0 / (p.N + 1.0), p.L);
  return shrink * (1.0 - chi * chi) / (nl - 1.0);
}

double sff_perturbative(double tau, double gamma_scaled) {
  const double u = gamma_scaled * tau;
  // 2 pi sqrt(Lambda) = Gamma for the small-eps Lambda.
  return 1.0 - gamma_scaled * u * std::exp(-u * u);
}

namespace {

// 24-point Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre24 {
  std::array<double, 24> x{};
  std::array<double, 24> w{};
  GaussLegendre24() {
    // Newton on Legendre P_24 from the Chebyshev-like initial guess.
    const int n = 24;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double p0, p1;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre24& gl24() {
  static const GaussLegendre24 g;
  return g;
}

// inner(z) = int_0^40 cos(tau sqrt(z^2 + 4w)) e^{-w} dw.
double inner_w_integral(double z, double tau) {
  const auto& g = gl24();
  constexpr double wmax = 40.0;
  constexpr int npanel = 40;
  const double h = wmax / npanel;
  double tot = 0.0;
  for (int p = 0; p < npanel; ++p) {
    const double a = p * h;
    double s = 0.0;
    for (int i = 0; i < 24; ++i) {
      const double w = a + 0.5 * h * (g.x[i] + 1.0);
      s += g.w[i] * std::cos(tau * std::sqrt(z * z + 4.0 * w)) * std::exp(-w);
    }
    tot += 0.5 * h * s;
  }
  return tot;
}

double j_integral(double tau, int ncells) {
  const auto& g = gl24();
  const double h = kPi / tau;  // one half-period of the z oscillation
  std::vector<double> partial(ncells);
  double run = 0.0;
  for (int c = 0; c < ncells; ++c) {
    const double a = c * h;
    double s = 0.0;
    for (int i = 0; i < 24; ++i) {
      const double z = a + 0.5 * h * (g.x[i] + 1.0);
      s += g.w[i] * inner_w_integral(z, tau);
    }
    run += 0.5 * h * s;
    partial[c] = run;
  }
  // Iterated averaging of the partial sums sums the alternating cell series.
  std::vector<double> t = std::move(partial);
  while (t.size() > 1) {
    for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
    t.pop_back();
  }
  return 2.0 * t[0];  // symmetric in z
}

}  // namespace

double perturb_integral_numeric(double tau, double lambda, double tol) {
  if (lambda < 0) {
    throw std::invalid_argument("perturb_integral_numeric: lambda < 0");
  }
  if (tau == 0.0) return 0.0;
  tau = std::abs(tau);
  const double coarse = j_integral(tau, 120);
  const double fine = j_integral(tau, 200);
  if (std::abs(fine - coarse) > tol * (1.0 + std::abs(fine))) {
    throw std::runtime_error(
        "perturb_integral_numeric: quadrature did not converge");
  }
  return std::sqrt(lambda) * fine;
}

}  // namespace sff
