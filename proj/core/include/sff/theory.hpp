#pragma once

#include <cstdint>
#include <vector>

#include "sff/rng.hpp"

namespace sff {

/// CUE spectral form factor at integer time t for dimension dim:
/// K(t) = min(t, dim) (the delta at t = 0 is subtracted, so K(0) = 0).
double sff_cue(std::int64_t t, std::int64_t dim);

enum class PredictionMode {
  ShortTime,     // t^L subsystem contribution, valid for t << N
  Extrapolated,  // CUE-saturated subsystem contribution, valid for all t
};

/// Parameters of the transition ensemble entering analytic predictions.
struct TransitionParams {
  int N = 0;       // single-subsystem dimension
  int L = 2;       // number of subsystems
  double eps = 0;  // coupling strength
  PhaseDistribution dist = PhaseDistribution::uniform();

  std::int64_t total_dim() const;
  double abs_chi() const { return dist.abs_chi(eps); }
  /// Gamma = sigma * eps * N^{L/2}, the scaled coupling strength.
  double gamma_scaled() const;
};

/// First-moment (m = 1) form factor prediction at integer time t.
double sff_prediction(std::int64_t t, const TransitionParams& p,
                      PredictionMode mode);

/// Scaling-limit prediction for kappa(tau):
/// exp(-Gamma^2 tau) + (1 - exp(-Gamma^2 tau)) min(tau, 1).
double sff_prediction_scaled(double tau, double gamma_scaled);

/// Coefficient A_k(t) of |chi|^{2t(m-k)} in the m-th moment at time t,
/// bipartite case (L = 2). Exact integer combinatorics in double.
double a_k_closed_form(int m, int k, std::int64_t t);

/// m-th moment prediction K_m(t); supports any m in ShortTime mode and
/// m <= 3 in Extrapolated mode (throws std::invalid_argument beyond that).
double moment_prediction(int m, std::int64_t t, const TransitionParams& p,
                         PredictionMode mode);

/// Principal branch of the Lambert W function for x >= -1/e.
double lambert_w0(double x);

/// Scaling-limit Thouless time: tau such that the deviation of kappa from
/// the CUE ramp equals delta, tau_Th = 1 - W0(delta Gamma^2 e^{Gamma^2}) /
/// Gamma^2. Returns 0 when the deviation never exceeds delta.
double thouless_time_lambert(double gamma_scaled, double delta);

/// Absolute-deviation Thouless estimates (log form and its large-N limit).
struct ThoulessAbsolute {
  double log_form = 0;  // (ln Delta - L ln N) / (2 ln |chi|)
  double large_n = 0;   // L ln N / (2 |ln chi|)
};
ThoulessAbsolute thouless_time_absolute(const TransitionParams& p,
                                        double delta_abs);

/// Ehrenfest-time estimate ln(N) / (2 ln(kA kB / 4)) for kicked rotor pairs.
double ehrenfest_estimate(int N, double kA, double kB);

/// Universal transition parameter Lambda.
struct TransitionParameter {
  double exact = 0;      // N^L (1 - |chi|^2) / (4 pi^2)
  double small_eps = 0;  // sigma^2 eps^2 N^L / (4 pi^2) = Gamma^2 / (4 pi^2)
};
TransitionParameter transition_parameter(const TransitionParams& p);

/// Finite-N variance of the perturbing matrix element entering Lambda,
/// nu~^2 = (1 - (2/(N+1))^L)(1 - |chi|^2) / (N^L - 1).
double nu_tilde_sq_finite_n(const TransitionParams& p);

/// Small-Lambda perturbative form kappa = 1 - 2 pi sqrt(Lambda) u e^{-u^2}
/// with u = Gamma tau.
double sff_perturbative(double tau, double gamma_scaled);

/// Independent quadrature for the perturbative correction integral,
/// I(tau) = sqrt(Lambda) * J(tau) with
/// J = int_0^inf dw e^{-w} int_{-inf}^{inf} dz cos(tau sqrt(z^2 + 4 w)).
/// The oscillatory z-integral is regularized by iterated averaging of
/// half-period partial sums. Throws std::runtime_error on non-convergence.
double perturb_integral_numeric(double tau, double lambda,
                                double tol = 1e-9);

}  // namespace sff
