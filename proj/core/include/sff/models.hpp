#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "sff/rng.hpp"

namespace sff {

struct RmteParams {
  int N = 0;
  int L = 2;
  double eps = 0.0;
  PhaseDistribution dist = PhaseDistribution::uniform();
  std::int64_t max_dim = 8192;  // memory guardrail on N^L

  std::int64_t total_dim() const;
};

struct KickedRotorParams {
  int N = 0;        // h_eff = 1/N
  double kA = 9.7;  // kick strengths of the two rotors
  double kB = 10.5;
  double gamma = 0.0;
  std::int64_t max_dim = 8192;
};

/// Boundary conditions of the torus quantization; keep all four phases away
/// from 0 and 1/2 to stay in the unitary symmetry class.
struct BlochPhases {
  double theta_qA = 0.0;
  double theta_qB = 0.0;
  double theta_pA = 0.0;
  double theta_pB = 0.0;

  static BlochPhases random(const RngStream& rng);
};

struct FloquetOperator {
  Eigen::MatrixXcd matrix;
  std::string provenance;  // model kind, parameters, seed

  std::int64_t dim() const { return matrix.rows(); }
  /// max |(U^dagger U - I)_{ij}|.
  double unitarity_defect() const;
};

struct EigenphaseSet {
  Eigen::VectorXd phases;  // sorted ascending, each in [-pi, pi)
  double unitarity_residual = 0.0;

  std::int64_t dim() const { return phases.size(); }
};

/// U = D (U_1 (x) ... (x) U_L) with independent CUE(N) factors and
/// D = diag(e^{i eps xi_I}).
FloquetOperator build_rmte(const RmteParams& params, const RngStream& rng);

/// Single kicked rotor on the N-dimensional torus Hilbert space, position
/// basis: U = T^dagger diag(e^{-i pi (n+theta_p)^2 / N}) T
///            diag(e^{-i (k N / 2 pi) cos(2 pi q_n)})
/// with q_n = (n+theta_q)/N and T the discrete position-to-momentum map.
Eigen::MatrixXcd build_single_rotor(int N, double k, double theta_q,
                                    double theta_p);

/// Coupled pair: U = diag(e^{-i (gamma N / 2 pi) cos(2 pi (q_A + q_B))})
/// (U_A (x) U_B).
FloquetOperator build_kicked_rotor_pair(const KickedRotorParams& params,
                                        const BlochPhases& bloch);

enum class EigenSolver {
  CayleyHermitian,  // unitary -> Hermitian via Cayley transform, then zheevd
  DenseQr,          // general dense non-Hermitian route (zgeev)
};

/// Eigenphases of a unitary operator, sorted ascending in [-pi, pi).
/// unitarity_residual records max_i ||lambda_i| - 1| for DenseQr; for the
/// Cayley route eigenvalues are unimodular by construction, so the residual
/// is max over random probe vectors v of ||U^dagger (U v) - v||_inf instead.
/// Throws std::runtime_error if the residual exceeds 1e-8.
EigenphaseSet eigenphases(const FloquetOperator& op,
                          EigenSolver solver = EigenSolver::CayleyHermitian);

}  // namespace sff
