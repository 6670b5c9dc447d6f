#pragma once

// Exact counting over S_n: conjugacy classes, cycle-length restrictions, rings.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qapdist/permutation.hpp"
#include "qapdist/scalar.hpp"

namespace qapdist {

/// All partitions of n in reverse-lexicographic order, starting at (n).
inline std::vector<CycleType> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partitions: n must be >= 0");
  std::vector<CycleType> out;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(CycleType{current});
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      self(self, remaining - part, part);
      current.pop_back();
    }
  };
  recurse(recurse, n, n);
  return out;
}

/// n! / Π (c^{m_c} m_c!) over distinct cycle lengths c with multiplicity m_c.
inline BigInt class_size(const CycleType& ct) {
  const int n = ct.n();
  BigInt denom = 1;
  std::size_t i = 0;
  while (i < ct.parts.size()) {
    const int c = ct.parts[i];
    std::size_t j = i;
    while (j < ct.parts.size() && ct.parts[j] == c) ++j;
    const auto m = static_cast<unsigned long>(j - i);
    BigInt cpow;
    mpz_ui_pow_ui(cpow.get_mpz_t(), static_cast<unsigned long>(c), m);
    denom *= cpow * factorial(m);
    i = j;
  }
  return factorial(static_cast<unsigned long>(n)) / denom;
}

/// Number of σ ∈ S_n with no cycle whose length is in `forbidden`.
///
/// Coefficients of the EGF (1/(1−x))·exp(−Σ_{c∈F} x^c/c). Differentiating
/// gives the integer recurrence a_m = Σ_{allowed ℓ ≤ m} (m−1)!/(m−ℓ)! · a_{m−ℓ}
/// (the cycle through the last point has length ℓ), with a_0 = 1.
inline BigInt count_no_short_cycles(int n, const std::set<int>& forbidden) {
  if (n < 0) throw std::invalid_argument("count_no_short_cycles: n must be >= 0");
  for (int c : forbidden)
    if (c < 1) throw std::invalid_argument("count_no_short_cycles: lengths must be positive");
  std::vector<BigInt> a(static_cast<std::size_t>(n) + 1);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt total = 0;
    BigInt falling = 1;  // (m−1)(m−2)…(m−ℓ+1)
    for (int len = 1; len <= m; ++len) {
      if (len > 1) falling *= (m - len + 1);
      if (!forbidden.contains(len)) total += falling * a[static_cast<std::size_t>(m - len)];
    }
    a[static_cast<std::size_t>(m)] = total;
  }
  return a[static_cast<std::size_t>(n)];
}

inline BigInt derangements(int n) { return count_no_short_cycles(n, {1}); }

/// |U(e,k)|: permutations moving exactly k points.
inline BigInt ring_size(int n, int k) {
  if (n < 1 || k < 0 || k > n)
    throw std::out_of_range("ring_size: need 0 <= k <= n, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  return binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(n - k)) *
         derangements(k);
}

/// Number of σ ∈ S_n with exactly p fixed points and t two-cycles.
inline BigInt count_with_stats(int n, int p, int t) {
  if (p < 0 || t < 0 || p + 2 * t > n) return 0;
  const auto un = static_cast<unsigned long>(n);
  const auto up = static_cast<unsigned long>(p);
  const auto ut = static_cast<unsigned long>(t);
  BigInt pairings;
  // (2t)! / (2^t t!) perfect matchings on the 2t chosen points.
  BigInt two_t = 1;
  mpz_mul_2exp(two_t.get_mpz_t(), two_t.get_mpz_t(), ut);
  pairings = factorial(2 * ut) / (two_t * factorial(ut));
  return binomial(un, up) * binomial(un - up, 2 * ut) * pairings *
         count_no_short_cycles(n - p - 2 * t, {1, 2});
}

/// Number of σ ∈ S_n with at least k fixed points.
inline BigInt count_at_least_fixed(int n, int k) {
  BigInt total = 0;
  for (int p = std::max(k, 0); p <= n; ++p) total += ring_size(n, n - p);
  return total;
}

/// Whether some permutation of S_n has cycle statistics (p, t).
inline bool is_attainable(int n, int p, int t) {
  if (p < 0 || t < 0) return false;
  const int used = p + 2 * t;
  return used == n || used <= n - 3;
}

/// (p, t) pairs attained by some σ ≠ e, sorted.
inline std::vector<CycleStats> feasible_pt_pairs(int n) {
  if (n < 4) throw std::invalid_argument("feasible_pt_pairs: n must be >= 4");
  std::vector<CycleStats> out;
  for (int p = 0; p <= n - 2; ++p)
    for (int t = 0; 2 * t <= n; ++t)
      if (is_attainable(n, p, t)) out.push_back({p, t});
  return out;
}

/// Canonical permutation with p fixed points and t two-cycles: points 1..p
/// fixed, then t adjacent transpositions, then one cycle on the remainder.
inline Permutation witness_with_stats(int n, int p, int t) {
  if (n < 1 || !is_attainable(n, p, t))
    throw std::invalid_argument("no permutation of size " + std::to_string(n) +
                                " has p=" + std::to_string(p) + ", t=" + std::to_string(t));
  std::vector<int> images(static_cast<std::size_t>(n));
  int i = 0;
  for (; i < p; ++i) images[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < t; ++k, i += 2) {
    images[static_cast<std::size_t>(i)] = i + 1;
    images[static_cast<std::size_t>(i + 1)] = i;
  }
  const int start = i;
  for (; i < n; ++i) images[static_cast<std::size_t>(i)] = (i + 1 < n) ? i + 1 : start;
  return Permutation::from_zero_based(std::move(images));
}

/// Canonical representative of a conjugacy class: consecutive cycles in the
/// order of `ct.parts`.
inline Permutation class_representative(const CycleType& ct) {
  const int n = ct.n();
  std::vector<int> images(static_cast<std::size_t>(n));
  int start = 0;
  for (int len : ct.parts) {
    for (int k = 0; k < len; ++k)
      images[static_cast<std::size_t>(start + k)] = start + (k + 1) % len;
    start += len;
  }
  return Permutation::from_zero_based(std::move(images));
}

}  // namespace qapdist
