#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sff/models.hpp"
#include "sff/rng.hpp"

namespace sff {

enum class Model {
  RmteBipartite,
  RmteExtended,
  KickedRotorPair,
  SingleCue,
  SingleKickedRotor,
};

const char* model_name(Model m);
Model model_from_name(const std::string& name);

/// Integer times t >= 1, strictly increasing. Dense at short times, then
/// logarithmically thinned so long runs stay at a bounded point count.
struct TimeGrid {
  std::vector<std::int64_t> times;

  std::size_t size() const { return times.size(); }
};

/// All integers 1..min(dense_until, t_max), then log-spaced up to t_max with
/// at most max_points stored times in total.
TimeGrid make_time_grid(std::int64_t t_max, std::int64_t dense_until,
                        std::size_t max_points = 600);

/// Full description of one Monte Carlo experiment.
struct EnsembleSpec {
  Model model = Model::RmteBipartite;
  int N = 0;
  int L = 2;
  double eps = 0.0;    // RMTE coupling
  double gamma = 0.0;  // rotor coupling
  double kA = 9.7;
  double kB = 10.5;
  PhaseDistribution dist = PhaseDistribution::uniform();
  int realizations = 0;
  std::uint64_t master_seed = 0;
  std::int64_t t_max = 0;  // 0: default 4 N^L
  int m_max = 1;           // moment orders 1..m_max, m_max <= 3
  double alpha = 0.05;     // smoothing window half-width (relative)
  int workers = 1;
  EigenSolver solver = EigenSolver::CayleyHermitian;
  std::int64_t max_dim = 8192;

  std::int64_t total_dim() const;
  std::int64_t effective_t_max() const;
  TimeGrid time_grid() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Eigenphases of realization `index` of the ensemble. Pure: depends only on
/// (spec, index), so realizations can run concurrently in any order.
EigenphaseSet realize(const EnsembleSpec& spec, int index);

}  // namespace sff
