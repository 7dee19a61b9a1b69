#include "sff/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace sff {

namespace {

double factorial_d(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double pow_d(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_mt(int m, int t) {
  if (m < 1 || t < 1) {
    throw std::invalid_argument("combinatorics: require m >= 1, t >= 1");
  }
}

// Calls fn(rho, shifts) for every element of G_m.
template <typename Fn>
void for_each_gm(int m, int t, Fn&& fn) {
  Permutation rho(m);
  std::iota(rho.begin(), rho.end(), 0);
  std::vector<int> shifts(m, 0);
  do {
    std::fill(shifts.begin(), shifts.end(), 0);
    while (true) {
      fn(rho, shifts);
      int i = 0;
      for (; i < m; ++i) {
        if (++shifts[i] < t) break;
        shifts[i] = 0;
      }
      if (i == m) break;
    }
  } while (std::next_permutation(rho.begin(), rho.end()));
}

}  // namespace

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compose: size mismatch");
  }
  Permutation c(a.size());
  for (std::size_t x = 0; x < b.size(); ++x) c[x] = a[b[x]];
  return c;
}

Permutation embed(const GmElement& g, int t) {
  const int m = g.m();
  check_mt(m, t);
  if (static_cast<int>(g.shifts.size()) != m || !is_permutation(g.rho)) {
    throw std::invalid_argument("embed: malformed G_m element");
  }
  Permutation p(static_cast<std::size_t>(m) * t);
  for (int n = 0; n < m; ++n) {
    for (int s = 0; s < t; ++s) {
      p[s + n * t] = (s + g.shifts[n]) % t + g.rho[n] * t;
    }
  }
  return p;
}

GmElement gm_multiply(const GmElement& a, const GmElement& b, int t) {
  const int m = a.m();
  if (b.m() != m) throw std::invalid_argument("gm_multiply: size mismatch");
  GmElement c;
  c.rho = compose(a.rho, b.rho);
  c.shifts.resize(m);
  for (int n = 0; n < m; ++n) {
    c.shifts[n] = (b.shifts[n] + a.shifts[b.rho[n]]) % t;
  }
  return c;
}

int fixed_point_count(const GmElement& g, int t) {
  int blocks = 0;
  for (int n = 0; n < g.m(); ++n) {
    if (g.rho[n] == n && g.shifts[n] % t == 0) ++blocks;
  }
  return blocks * t;
}

Permutation cyclic_shift_power(int m, int t) {
  GmElement eta{Permutation(m), std::vector<int>(m, 1 % t)};
  std::iota(eta.rho.begin(), eta.rho.end(), 0);
  return embed(eta, t);
}

std::vector<Permutation> commutant_bruteforce(int m, int t) {
  check_mt(m, t);
  const int n = m * t;
  if (n > 9) {
    throw std::invalid_argument("commutant_bruteforce: mt must be <= 9");
  }
  const Permutation eta = cyclic_shift_power(m, t);
  std::vector<Permutation> out;
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (compose(p, eta) == compose(eta, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<double> a_k_enumerate(int m, int t) {
  check_mt(m, t);
  if (factorial_d(m) * pow_d(t, m) > 1e7) {
    throw std::invalid_argument("a_k_enumerate: m! t^m exceeds 1e7");
  }
  std::vector<double> a(m + 1, 0.0);
  for_each_gm(m, t, [&](const Permutation& rho, const std::vector<int>& sh) {
    int blocks = 0;
    for (int n = 0; n < m; ++n) {
      if (rho[n] == n && sh[n] == 0) ++blocks;
    }
    a[blocks] += 1.0;
  });
  return a;
}

std::vector<double> a_k_extended_enumerate(int m, int t, int L) {
  check_mt(m, t);
  if (L < 2) throw std::invalid_argument("a_k_extended_enumerate: L >= 2");
  if (m > 20) throw std::invalid_argument("a_k_extended_enumerate: m <= 20");
  if (pow_d(factorial_d(m) * pow_d(t, m), L - 1) > 1e7) {
    throw std::invalid_argument(
        "a_k_extended_enumerate: (m! t^m)^(L-1) exceeds 1e7");
  }
  // Multiplicity of each fixed-block mask over G_m.
  const std::size_t nmask = std::size_t{1} << m;
  std::vector<double> count(nmask, 0.0);
  for_each_gm(m, t, [&](const Permutation& rho, const std::vector<int>& sh) {
    std::size_t mask = 0;
    for (int n = 0; n < m; ++n) {
      if (rho[n] == n && sh[n] == 0) mask |= std::size_t{1} << n;
    }
    count[mask] += 1.0;
  });
  // Superset zeta transform: f[S] = number of elements whose mask contains S.
  std::vector<double> f = count;
  for (int bit = 0; bit < m; ++bit) {
    for (std::size_t s = 0; s < nmask; ++s) {
      if (!(s & (std::size_t{1} << bit))) {
        f[s] += f[s | (std::size_t{1} << bit)];
      }
    }
  }
  // Tuples whose common fixed blocks contain S number f[S]^(L-1); Moebius
  // inversion on the subset lattice yields the exact counts.
  std::vector<double> g(nmask);
  for (std::size_t s = 0; s < nmask; ++s) g[s] = pow_d(f[s], L - 1);
  for (int bit = 0; bit < m; ++bit) {
    for (std::size_t s = 0; s < nmask; ++s) {
      if (!(s & (std::size_t{1} << bit))) {
        g[s] -= g[s | (std::size_t{1} << bit)];
      }
    }
  }
  std::vector<double> a(m + 1, 0.0);
  for (std::size_t s = 0; s < nmask; ++s) {
    a[std::popcount(s)] += g[s];
  }
  return a;
}

}  // namespace sff
