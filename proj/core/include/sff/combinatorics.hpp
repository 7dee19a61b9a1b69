#pragma once

#include <cstdint>
#include <vector>

namespace sff {

/// Permutation of {0, ..., n-1}; p[i] is the image of i.
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& p);

/// (a o b)(x) = a(b(x)).
Permutation compose(const Permutation& a, const Permutation& b);

/// Element of G_m = S_m x| <eta_1>^m acting on {0, ..., mt-1}:
/// x = s + n t maps to ((s + shifts[n]) mod t) + rho[n] t.
struct GmElement {
  Permutation rho;          // permutation of the m blocks
  std::vector<int> shifts;  // cyclic shift within each block, mod t

  int m() const { return static_cast<int>(rho.size()); }
};

/// Embedding of a G_m element into S_{mt}.
Permutation embed(const GmElement& g, int t);

/// Group product consistent with the embedding: embed(a * b) =
/// compose(embed(a), embed(b)).
GmElement gm_multiply(const GmElement& a, const GmElement& b, int t);

/// Number of fixed points of the embedded element; always a multiple of t.
int fixed_point_count(const GmElement& g, int t);

/// The cyclic shift eta_1^{(x) m}: identity block permutation, all shifts 1.
Permutation cyclic_shift_power(int m, int t);

/// All permutations of S_{mt} commuting with eta_1^{(x) m}, found by brute
/// force; feasible for mt <= 9. This is exactly the embedded copy of G_m.
std::vector<Permutation> commutant_bruteforce(int m, int t);

/// A_k(t) for the bipartite case by direct enumeration of G_m: the number of
/// elements with exactly k t fixed points. Requires m! t^m <= 1e7.
/// Returns the vector (A_0, ..., A_m).
std::vector<double> a_k_enumerate(int m, int t);

/// A_k(t) for L subsystems: the number of (L-1)-tuples of G_m elements with
/// exactly k t common fixed points. Requires (m! t^m)^(L-1) <= 1e7 worth of
/// work; implemented via fixed-block bitmask multiplicities, so the actual
/// cost is O(m! t^m + 2^m (L-1)). Returns (A_0, ..., A_m).
std::vector<double> a_k_extended_enumerate(int m, int t, int L);

}  // namespace sff
