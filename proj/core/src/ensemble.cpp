#include "sff/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace sff {

const char* model_name(Model m) {
  switch (m) {
    case Model::RmteBipartite:
      return "rmte-bipartite";
    case Model::RmteExtended:
      return "rmte-extended";
    case Model::KickedRotorPair:
      return "kicked-rotor-pair";
    case Model::SingleCue:
      return "single-cue";
    case Model::SingleKickedRotor:
      return "single-kicked-rotor";
  }
  throw std::logic_error("unreachable");
}

Model model_from_name(const std::string& name) {
  if (name == "rmte-bipartite") return Model::RmteBipartite;
  if (name == "rmte-extended") return Model::RmteExtended;
  if (name == "kicked-rotor-pair") return Model::KickedRotorPair;
  if (name == "single-cue") return Model::SingleCue;
  if (name == "single-kicked-rotor") return Model::SingleKickedRotor;
  throw std::invalid_argument("unknown model: " + name);
}

TimeGrid make_time_grid(std::int64_t t_max, std::int64_t dense_until,
                        std::size_t max_points) {
  if (t_max < 1) throw std::invalid_argument("make_time_grid: t_max < 1");
  if (max_points < 2) {
    throw std::invalid_argument("make_time_grid: max_points < 2");
  }
  TimeGrid grid;
  const std::int64_t dense_end = std::min(t_max, std::max<std::int64_t>(
                                                     1, dense_until));
  for (std::int64_t t = 1; t <= dense_end; ++t) {
    grid.times.push_back(t);
    if (grid.times.size() >= max_points && t < t_max) {
      // Dense part alone exhausts the budget; re-thin it logarithmically.
      grid.times.clear();
      break;
    }
  }
  if (grid.times.empty() || dense_end < t_max) {
    const std::int64_t start = grid.times.empty() ? 1 : dense_end;
    const std::size_t budget =
        max_points - std::min(max_points - 1, grid.times.size());
    const double lo = std::log(static_cast<double>(start));
    const double hi = std::log(static_cast<double>(t_max));
    std::int64_t last = grid.times.empty() ? 0 : grid.times.back();
    for (std::size_t i = 0; i <= budget; ++i) {
      const double f = budget == 0 ? 1.0 : static_cast<double>(i) / budget;
      const auto t = static_cast<std::int64_t>(
          std::llround(std::exp(lo + f * (hi - lo))));
      if (t > last && t <= t_max) {
        grid.times.push_back(t);
        last = t;
      }
    }
    if (grid.times.back() != t_max) grid.times.push_back(t_max);
  }
  return grid;
}

std::int64_t EnsembleSpec::total_dim() const {
  std::int64_t d = 1;
  switch (model) {
    case Model::SingleCue:
    case Model::SingleKickedRotor:
      d = N;
      break;
    case Model::RmteBipartite:
    case Model::KickedRotorPair:
      d = static_cast<std::int64_t>(N) * N;
      break;
    case Model::RmteExtended:
      for (int i = 0; i < L; ++i) d *= N;
      break;
  }
  return d;
}

std::int64_t EnsembleSpec::effective_t_max() const {
  return t_max > 0 ? t_max : 4 * total_dim();
}

TimeGrid EnsembleSpec::time_grid() const {
  return make_time_grid(effective_t_max(), 4 * N);
}

void EnsembleSpec::validate() const {
  if (N < 1) throw std::invalid_argument("spec.N must be >= 1");
  if (realizations < 2) {
    throw std::invalid_argument("spec.realizations must be >= 2");
  }
  if (m_max < 1 || m_max > 3) {
    throw std::invalid_argument("spec.m_max must be in {1, 2, 3}");
  }
  if (alpha <= 0.0 || alpha > 0.5) {
    throw std::invalid_argument("spec.alpha must be in (0, 0.5]");
  }
  if (workers < 1) throw std::invalid_argument("spec.workers must be >= 1");
  if (total_dim() > max_dim) {
    throw std::invalid_argument("spec dimension exceeds spec.max_dim");
  }
  switch (model) {
    case Model::RmteBipartite:
      if (L != 2) throw std::invalid_argument("spec.L must be 2 (bipartite)");
      [[fallthrough]];
    case Model::RmteExtended:
      if (L < 2) throw std::invalid_argument("spec.L must be >= 2");
      if (eps < 0) throw std::invalid_argument("spec.eps must be >= 0");
      if (gamma != 0) {
        throw std::invalid_argument("spec.gamma applies to rotor models only");
      }
      break;
    case Model::KickedRotorPair:
    case Model::SingleKickedRotor:
      if (gamma < 0) throw std::invalid_argument("spec.gamma must be >= 0");
      if (eps != 0) {
        throw std::invalid_argument("spec.eps applies to RMTE models only");
      }
      if (N < 2) throw std::invalid_argument("spec.N must be >= 2 for rotors");
      break;
    case Model::SingleCue:
      if (eps != 0 || gamma != 0) {
        throw std::invalid_argument("spec: single-cue takes no coupling");
      }
      break;
  }
}

EigenphaseSet realize(const EnsembleSpec& spec, int index) {
  const RngStream rng{spec.master_seed, static_cast<std::uint64_t>(index)};
  try {
    switch (spec.model) {
      case Model::RmteBipartite:
      case Model::RmteExtended: {
        RmteParams p;
        p.N = spec.N;
        p.L = spec.L;
        p.eps = spec.eps;
        p.dist = spec.dist;
        p.max_dim = spec.max_dim;
        return eigenphases(build_rmte(p, rng), spec.solver);
      }
      case Model::KickedRotorPair: {
        KickedRotorParams p;
        p.N = spec.N;
        p.kA = spec.kA;
        p.kB = spec.kB;
        p.gamma = spec.gamma;
        p.max_dim = spec.max_dim;
        return eigenphases(build_kicked_rotor_pair(p, BlochPhases::random(rng)),
                           spec.solver);
      }
      case Model::SingleCue: {
        FloquetOperator op;
        op.matrix = sample_cue(spec.N, rng);
        op.provenance = "single-cue N=" + std::to_string(spec.N);
        return eigenphases(op, spec.solver);
      }
      case Model::SingleKickedRotor: {
        const BlochPhases b = BlochPhases::random(rng);
        FloquetOperator op;
        op.matrix =
            build_single_rotor(spec.N, spec.kA, b.theta_qA, b.theta_pA);
        op.provenance = "single-kicked-rotor N=" + std::to_string(spec.N);
        return eigenphases(op, spec.solver);
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("realization " + std::to_string(index) + ": " +
                             e.what());
  }
  throw std::logic_error("unreachable");
}

}  // namespace sff
