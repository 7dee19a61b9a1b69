#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sff/ensemble.hpp"
#include "sff/models.hpp"

namespace sff {

/// |tr U^t|^{2m} for t = 1..t_max (rows) and m = 1..m_max (columns),
/// computed from the eigenphases as exact power sums.
Eigen::MatrixXd trace_powers(const EigenphaseSet& phases, std::int64_t t_max,
                             int m_max);

/// Same, restricted to the given time grid.
Eigen::MatrixXd trace_powers(const EigenphaseSet& phases, const TimeGrid& grid,
                             int m_max);

/// Ensemble means and standard errors of K_m(t) with the rescaled moments
/// kappa_m(tau) = (K_m / m!)^{1/m} / N^L, tau = t / N^L.
struct SffEstimate {
  TimeGrid grid;
  std::vector<double> tau;  // grid.times / N^L
  int N = 0;
  int L = 2;
  int realizations = 0;
  int m_max = 1;
  double alpha = 0.05;
  // npts x m_max, column m-1 holds moment order m.
  Eigen::MatrixXd k_mean;
  Eigen::MatrixXd k_stderr;
  Eigen::MatrixXd kappa;
  Eigen::MatrixXd kappa_stderr;
};

/// Monte Carlo estimate over spec.realizations realizations. Deterministic
/// for a given spec: per-realization streams are counter-seeded and the
/// reduction is a fixed pairwise tree, so the result is bit-identical for
/// any worker count.
SffEstimate estimate_sff(const EnsembleSpec& spec);

/// Spacings of consecutive eigenphases, wrap-around included, rescaled so
/// the sample mean is exactly 1 (dim spacings per realization).
struct SpacingSample {
  Eigen::VectorXd spacings;  // unsorted, in phase order
};
SpacingSample level_spacings(const EigenphaseSet& phases);

/// Wigner surmise for the CUE, p(s) = (32 / pi^2) s^2 e^{-4 s^2 / pi}.
double wigner_surmise(double s);
double wigner_surmise_cdf(double s);
double poisson_spacing_cdf(double s);

/// Kolmogorov-Smirnov distance between the empirical law of the samples and
/// the given CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Moving average over the multiplicative window [t(1-alpha), t(1+alpha)]
/// intersected with the grid; endpoint windows truncate naturally.
std::vector<double> smooth_moving_average(
    const std::vector<std::int64_t>& times, const std::vector<double>& values,
    double alpha);

enum class ThoulessMode {
  RelativeToHeisenberg,  // threshold delta * N^L
  Absolute,              // threshold delta
};

struct ThoulessResult {
  bool found = false;
  double t_th = 0.0;
  double tau_th = 0.0;
  double min_deviation = 0.0;  // smallest smoothed deviation seen
};

/// First grid time from which the smoothed deviation K(t) - min(t, N^L)
/// stays below the threshold for run_length consecutive grid points.
ThoulessResult extract_thouless(const SffEstimate& estimate, double delta,
                                ThoulessMode mode, int run_length = 5);

/// Fixed-order pairwise summation tree over v[offset + i*stride],
/// i = 0..count-1; the reduction backbone of estimate_sff, exposed for
/// testing.
double pairwise_sum(const double* v, std::size_t count, std::size_t stride);

}  // namespace sff
