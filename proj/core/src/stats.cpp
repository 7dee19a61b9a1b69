#include "sff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sff {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// |z|^2, |z|^4, ..., |z|^{2 m_max} into row `row`.
void fill_moment_row(Eigen::MatrixXd& out, Eigen::Index row,
                     const std::complex<double>& z, int m_max) {
  const double p = std::norm(z);
  double acc = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    acc *= p;
    out(row, m - 1) = acc;
  }
}

}  // namespace

Eigen::MatrixXd trace_powers(const EigenphaseSet& phases, std::int64_t t_max,
                             int m_max) {
  if (t_max < 1 || m_max < 1) {
    throw std::invalid_argument("trace_powers: t_max and m_max must be >= 1");
  }
  const Eigen::Index n = phases.phases.size();
  Eigen::VectorXcd w(n), z(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    w(j) = std::polar(1.0, phases.phases(j));
  }
  z.setOnes();
  Eigen::MatrixXd out(t_max, m_max);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    z.array() *= w.array();
    fill_moment_row(out, t - 1, z.sum(), m_max);
  }
  return out;
}

Eigen::MatrixXd trace_powers(const EigenphaseSet& phases, const TimeGrid& grid,
                             int m_max) {
  if (m_max < 1) throw std::invalid_argument("trace_powers: m_max >= 1");
  const Eigen::Index n = phases.phases.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(grid.size()), m_max);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto t = static_cast<double>(grid.times[i]);
    std::complex<double> z = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      z += std::polar(1.0, phases.phases(j) * t);
    }
    fill_moment_row(out, static_cast<Eigen::Index>(i), z, m_max);
  }
  return out;
}

double pairwise_sum(const double* v, std::size_t count, std::size_t stride) {
  if (count == 0) return 0.0;
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i * stride];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, half, stride) +
         pairwise_sum(v + half * stride, count - half, stride);
}

SffEstimate estimate_sff(const EnsembleSpec& spec) {
  spec.validate();
  const TimeGrid grid = spec.time_grid();
  const std::size_t npts = grid.size();
  const int r_total = spec.realizations;
  const int m_max = spec.m_max;
  const std::size_t per_real = npts * static_cast<std::size_t>(m_max);

  // Slab of per-realization moment values; each worker writes only the rows
  // of the realizations it owns, so no synchronization is needed.
  std::vector<double> slab(per_real * static_cast<std::size_t>(r_total));
  const int workers = std::min(spec.workers, r_total);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](int worker_id) {
    try {
      for (int r = worker_id; r < r_total; r += workers) {
        const EigenphaseSet phases = realize(spec, r);
        const Eigen::MatrixXd vals = trace_powers(phases, grid, m_max);
        double* dst = slab.data() + per_real * static_cast<std::size_t>(r);
        for (int m = 0; m < m_max; ++m) {
          for (std::size_t i = 0; i < npts; ++i) {
            dst[i * m_max + m] = vals(static_cast<Eigen::Index>(i), m);
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SffEstimate est;
  est.grid = grid;
  est.N = spec.N;
  est.L = (spec.model == Model::SingleCue ||
           spec.model == Model::SingleKickedRotor)
              ? 1
              : spec.L;
  est.realizations = r_total;
  est.m_max = m_max;
  est.alpha = spec.alpha;
  const double dim = static_cast<double>(spec.total_dim());
  est.tau.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    est.tau[i] = static_cast<double>(grid.times[i]) / dim;
  }
  est.k_mean.resize(static_cast<Eigen::Index>(npts), m_max);
  est.k_stderr.resize(static_cast<Eigen::Index>(npts), m_max);
  est.kappa.resize(static_cast<Eigen::Index>(npts), m_max);
  est.kappa_stderr.resize(static_cast<Eigen::Index>(npts), m_max);

  std::vector<double> dev(r_total);
  for (std::size_t i = 0; i < npts; ++i) {
    for (int m = 0; m < m_max; ++m) {
      const double* base = slab.data() + i * m_max + m;
      const auto rn = static_cast<std::size_t>(r_total);
      const double mean = pairwise_sum(base, rn, per_real) / r_total;
      for (int r = 0; r < r_total; ++r) {
        const double d = base[per_real * static_cast<std::size_t>(r)] - mean;
        dev[static_cast<std::size_t>(r)] = d * d;
      }
      const double var = pairwise_sum(dev.data(), rn, 1) / (r_total - 1);
      const double se = std::sqrt(var / r_total);
      const auto row = static_cast<Eigen::Index>(i);
      est.k_mean(row, m) = mean;
      est.k_stderr(row, m) = se;
      const int order = m + 1;
      const double kap =
          std::pow(std::max(mean, 0.0) / factorial(order), 1.0 / order) / dim;
      est.kappa(row, m) = kap;
      // Delta method: d kappa / d K = kappa / (order K).
      est.kappa_stderr(row, m) =
          mean > 0.0 ? kap * se / (order * mean) : 0.0;
    }
  }
  return est;
}

SpacingSample level_spacings(const EigenphaseSet& phases) {
  const Eigen::Index n = phases.phases.size();
  if (n < 2) throw std::invalid_argument("level_spacings: dim must be >= 2");
  Eigen::VectorXd gaps(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    gaps(i) = phases.phases(i + 1) - phases.phases(i);
  }
  gaps(n - 1) = phases.phases(0) + 2.0 * kPi - phases.phases(n - 1);
  // Rescale so the sample mean is exactly 1; the nominal scale dim/(2 pi)
  // agrees up to rounding since the gaps sum to 2 pi.
  const double total = gaps.sum();
  SpacingSample s;
  s.spacings = gaps * (static_cast<double>(n) / total);
  return s;
}

double wigner_surmise(double s) {
  if (s < 0) throw std::domain_error("wigner_surmise: s must be >= 0");
  return (32.0 / (kPi * kPi)) * s * s * std::exp(-4.0 * s * s / kPi);
}

double wigner_surmise_cdf(double s) {
  if (s < 0) throw std::domain_error("wigner_surmise_cdf: s must be >= 0");
  return std::erf(2.0 * s / std::sqrt(kPi)) -
         (4.0 * s / kPi) * std::exp(-4.0 * s * s / kPi);
}

double poisson_spacing_cdf(double s) {
  if (s < 0) throw std::domain_error("poisson_spacing_cdf: s must be >= 0");
  return 1.0 - std::exp(-s);
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

std::vector<double> smooth_moving_average(
    const std::vector<std::int64_t>& times, const std::vector<double>& values,
    double alpha) {
  if (times.empty() || times.size() != values.size()) {
    throw std::invalid_argument("smooth_moving_average: bad series");
  }
  if (alpha <= 0.0 || alpha > 0.5) {
    throw std::invalid_argument("smooth_moving_average: alpha in (0, 0.5]");
  }
  const std::size_t n = times.size();
  std::vector<double> out(n);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(times[i]);
    const double wlo = t * (1.0 - alpha);
    const double whi = t * (1.0 + alpha);
    while (lo < n && static_cast<double>(times[lo]) < wlo) ++lo;
    if (hi < i + 1) hi = i + 1;
    while (hi < n && static_cast<double>(times[hi]) <= whi) ++hi;
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += values[j];
    out[i] = s / static_cast<double>(hi - lo);
  }
  return out;
}

ThoulessResult extract_thouless(const SffEstimate& estimate, double delta,
                                ThoulessMode mode, int run_length) {
  if (!(delta > 0)) throw std::invalid_argument("extract_thouless: delta > 0");
  if (run_length < 1) {
    throw std::invalid_argument("extract_thouless: run_length >= 1");
  }
  const std::size_t n = estimate.grid.size();
  std::int64_t dim = 1;
  for (int i = 0; i < estimate.L; ++i) dim *= estimate.N;
  if (estimate.grid.times.back() < dim) {
    throw std::invalid_argument(
        "extract_thouless: grid must extend to the Heisenberg time");
  }
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = estimate.k_mean(static_cast<Eigen::Index>(i), 0);
  }
  const std::vector<double> ks =
      smooth_moving_average(estimate.grid.times, k, estimate.alpha);
  const double threshold =
      mode == ThoulessMode::RelativeToHeisenberg
          ? delta * static_cast<double>(dim)
          : delta;
  ThoulessResult res;
  res.min_deviation = std::numeric_limits<double>::infinity();
  int run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ramp = static_cast<double>(
        std::min(estimate.grid.times[i], dim));
    const double deviation = ks[i] - ramp;
    res.min_deviation = std::min(res.min_deviation, deviation);
    if (deviation < threshold) {
      if (++run >= run_length && !res.found) {
        const std::size_t first = i + 1 - static_cast<std::size_t>(run_length);
        res.found = true;
        res.t_th = static_cast<double>(estimate.grid.times[first]);
        res.tau_th = res.t_th / static_cast<double>(dim);
      }
    } else {
      run = 0;
    }
  }
  return res;
}

}  // namespace sff
