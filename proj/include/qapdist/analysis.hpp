#pragma once

// Distribution analytics over S_n: ring averages around a center, tail
// probabilities, the tail theorems checked by enumeration, best-of-sample
// search and the spike class functions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qapdist/cone.hpp"
#include "qapdist/counting.hpp"
#include "qapdist/enumerate.hpp"
#include "qapdist/instance.hpp"
#include "qapdist/isotypic.hpp"
#include "qapdist/random.hpp"

namespace qapdist {

/// Largest n at which analytics enumerate S_n or a ring exhaustively.
inline constexpr int kEnumerationMaxN = 8;

inline void require_enumerable(int n, int cap = kEnumerationMaxN) {
  if (n < 1 || n > cap)
    throw std::out_of_range("exhaustive enumeration is limited to n <= " + std::to_string(cap) +
                            ", got n=" + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Optimum by enumeration

template <Scalar T>
struct Optimum {
  Permutation argmax;
  T value;  // f(argmax), unshifted
};

/// Global maximum by full enumeration; ties go to the lexicographically first
/// permutation.
template <Scalar T>
Optimum<T> argmax_enumerate(const QapInstance<T>& inst, int jobs = 1,
                            int cap = kExactProjectionMaxN) {
  const int n = inst.n();
  require_enumerable(n, cap);
  struct Best {
    bool set = false;
    T value{};
    std::vector<int> images;
  };
  Best best = reduce_permutations(
      n, jobs, Best{},
      [&](Best& acc, std::span<const int> s) {
        T v = inst.evaluate(s);
        if (!acc.set || v > acc.value) {
          acc.set = true;
          acc.value = std::move(v);
          acc.images.assign(s.begin(), s.end());
        }
      },
      [](Best& into, Best&& from) {
        if (from.set && (!into.set || from.value > into.value)) into = std::move(from);
      });
  return {Permutation::from_zero_based(std::move(best.images)), best.value};
}

// ---------------------------------------------------------------------------
// Ring profiles

enum class RingMode { Exact, Projected };

inline const char* to_string(RingMode m) { return m == RingMode::Exact ? "exact" : "projected"; }

template <Scalar T>
struct RingProfile {
  int n = 0;
  Permutation center = Permutation::identity(1);
  RingMode mode = RingMode::Exact;
  T center_value{};              // f₀(center)
  std::vector<T> averages;       // mean of f₀ over U(center, k); 0 for the empty ring k = 1
  std::vector<BigInt> ring_sizes;
  std::vector<T> thresholds;     // α(n,k)·f₀(center), empty when n < 4

  bool empty_ring(int k) const { return ring_sizes[static_cast<std::size_t>(k)] == 0; }
};

namespace detail {

/// Ring averages of f around e from the central projection of f.
template <Scalar T>
std::vector<T> ring_sums_from_projection(const ClassFunction<T>& g) {
  const int n = g.n();
  std::vector<T> sums(static_cast<std::size_t>(n) + 1, T(0));
  if (g.is_span()) {
    for (int p = 0; p <= n; ++p)
      for (int t = 0; p + 2 * t <= n; ++t) {
        const BigInt c = count_with_stats(n, p, t);
        if (c == 0) continue;
        sums[static_cast<std::size_t>(n - p)] += from_bigint<T>(c) * g.coefficients().value(p, t);
      }
  } else {
    for (const auto& [ct, v] : g.values())
      sums[static_cast<std::size_t>(n - ct.count(1))] += from_bigint<T>(class_size(ct)) * v;
  }
  return sums;
}

template <Scalar T>
ClassFunction<T> central_projection_auto(const QapInstance<T>& inst, int jobs) {
  if (inst.is_matrix_pair() && inst.n() >= 4) return central_projection_kb(inst);
  return central_projection_exact(inst, jobs);
}

}  // namespace detail

/// Mean of f₀ over each ring U(center, k), k = 0..n.
///
/// Exact mode walks every ring (n ≤ 8). Projected mode relabels the center
/// to e, takes the central projection (closed form for matrix pairs, class
/// averages otherwise) and weights classes by size: ring averages around e
/// are the same for f and its projection.
template <Scalar T>
RingProfile<T> ring_profile(const QapInstance<T>& inst, const Permutation& center,
                            RingMode mode = RingMode::Exact, int jobs = 1) {
  const int n = inst.n();
  if (center.size() != n) throw std::invalid_argument("center size does not match instance");
  RingProfile<T> prof;
  prof.n = n;
  prof.center = center;
  prof.mode = mode;
  prof.center_value = shifted_value(inst, center);
  for (int k = 0; k <= n; ++k) prof.ring_sizes.push_back(ring_size(n, k));

  std::vector<T> sums(static_cast<std::size_t>(n) + 1, T(0));
  if (mode == RingMode::Exact) {
    require_enumerable(n);
    for (int k = 0; k <= n; ++k) {
      T s(0);
      for_each_in_ring(center, k, [&](const Permutation& sigma) { s += inst.evaluate(sigma); });
      sums[static_cast<std::size_t>(k)] = s;
    }
  } else {
    const QapInstance<T> moved = relabel_to_identity(inst, center);
    sums = detail::ring_sums_from_projection(detail::central_projection_auto(moved, jobs));
  }
  for (int k = 0; k <= n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (prof.ring_sizes[idx] == 0) {
      prof.averages.push_back(T(0));
    } else {
      prof.averages.push_back(sums[idx] / from_bigint<T>(prof.ring_sizes[idx]) - inst.mean());
    }
  }
  if (n >= 4)
    for (int k = 0; k <= n; ++k)
      prof.thresholds.push_back(ScalarTraits<T>::from_rational(alpha_threshold(n, k)) *
                                prof.center_value);
  return prof;
}

template <Scalar T>
struct RingCheck {
  int k;
  T average;
  T threshold;
  T gap;  // average − threshold
  bool pass;
};

template <Scalar T>
struct BullseyeReport {
  RingProfile<T> profile;
  std::vector<RingCheck<T>> rows;
  bool all_pass = true;
};

/// Ring averages against α(n,k)·f₀(τ) around an optimal center τ.
template <Scalar T>
BullseyeReport<T> verify_bullseye(const QapInstance<T>& inst, const Permutation& center,
                                  RingMode mode = RingMode::Exact, double tol = 1e-9) {
  const Regime reg = classify(inst);
  if (reg.label != RegimeLabel::Bullseye)
    throw std::invalid_argument(std::string("ring bound needs a bullseye instance, got ") +
                                to_string(reg.label));
  if (inst.n() <= kEnumerationMaxN) {
    const Optimum<T> opt = argmax_enumerate(inst);
    if (sign_of<T>(T(opt.value - inst.evaluate(center)), is_exact_v<T> ? 0.0 : tol) != 0)
      throw std::invalid_argument("center is not an optimal permutation");
  }
  BullseyeReport<T> rep{ring_profile(inst, center, mode), {}, true};
  const double eps = is_exact_v<T> ? 0.0 : tol * std::max(1.0, std::abs(to_double(rep.profile.center_value)));
  for (int k = 0; k <= inst.n(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    RingCheck<T> row{k, rep.profile.averages[idx], rep.profile.thresholds[idx], T(0), true};
    row.gap = row.average - row.threshold;
    row.pass = rep.profile.empty_ring(k) || sign_of<T>(row.gap, eps) >= 0;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tail probabilities

/// z such that a two-sided normal interval has 99% coverage.
inline constexpr double kZ99 = 2.5758293035489004;

template <Scalar T>
struct TailReport {
  T threshold{};            // on the shifted objective f₀
  bool exact = true;
  BigInt hits = 0;          // σ with f₀(σ) ≥ threshold (or draws, in Monte Carlo mode)
  BigInt total = 0;         // n! or the sample size
  double probability = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // 99% normal interval, Monte Carlo only
  std::string theorem;      // empty unless produced by verify_theorem
  std::optional<Rational> bound;
  bool pass = true;
  bool trivial = false;     // bound is 0, so the check holds vacuously
  int k = 0;
  Rational gamma = 0;
  T optimum{};              // f₀(τ)

  Rational exact_probability() const { return ratio(hits, total); }
};

/// P{σ : f₀(σ) ≥ threshold} by enumeration of S_n (n ≤ 8 by default).
template <Scalar T>
TailReport<T> tail_probability_exact(const QapInstance<T>& inst, const T& threshold, int jobs = 1,
                                     int cap = kEnumerationMaxN) {
  const int n = inst.n();
  require_enumerable(n, cap);
  const T cut = threshold + inst.mean();
  const long hits = reduce_permutations(
      n, jobs, 0L, [&](long& acc, std::span<const int> s) { acc += inst.evaluate(s) >= cut; },
      [](long& into, long&& from) { into += from; });
  TailReport<T> rep;
  rep.threshold = threshold;
  rep.exact = true;
  rep.hits = hits;
  rep.total = factorial(static_cast<unsigned long>(n));
  rep.probability = rep.exact_probability().get_d();
  rep.ci_low = rep.ci_high = rep.probability;
  return rep;
}

/// Monte Carlo estimate with a 99% normal-approximation interval.
template <Scalar T>
TailReport<T> tail_probability_montecarlo(const QapInstance<T>& inst, const T& threshold,
                                          long samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const T cut = threshold + inst.mean();
  long hits = 0;
  for (long s = 0; s < samples; ++s)
    hits += inst.evaluate(random_permutation(inst.n(), rng)) >= cut;
  TailReport<T> rep;
  rep.threshold = threshold;
  rep.exact = false;
  rep.hits = hits;
  rep.total = samples;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double half = kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  rep.probability = p;
  rep.ci_low = std::max(0.0, p - half);
  rep.ci_high = std::min(1.0, p + half);
  return rep;
}

/// Checks P{f₀(σ) ≥ γβ(n,k)·f₀(τ)} ≥ (1−γ)β(n,k)/(d·k!) exactly, with τ an
/// enumerated optimum.
template <Scalar T>
TailReport<T> verify_theorem(TailTheorem thm, const QapInstance<T>& inst, int k,
                             const Rational& gamma, int jobs = 1) {
  const int n = inst.n();
  require_theorem_range(n, k);
  if (gamma <= 0 || gamma >= 1) throw std::out_of_range("gamma must lie in (0, 1)");
  const Regime reg = classify(inst);
  if (!satisfies(reg.label, theorem_regime(thm)))
    throw std::invalid_argument(std::string("theorem ") + theorem_id(thm) + " needs a " +
                                to_string(theorem_regime(thm)) + " instance, got " +
                                to_string(reg.label));
  require_enumerable(n);
  const Optimum<T> opt = argmax_enumerate(inst, jobs);
  const T top = opt.value - inst.mean();
  const Rational beta = theorem_beta(thm, n, k);
  const T threshold = ScalarTraits<T>::from_rational(gamma * beta) * top;
  TailReport<T> rep = tail_probability_exact(inst, threshold, jobs);
  rep.theorem = theorem_id(thm);
  rep.bound = theorem_probability_bound(thm, n, k, gamma);
  rep.pass = rep.exact_probability() >= *rep.bound;
  rep.trivial = sgn(*rep.bound) == 0;
  rep.k = k;
  rep.gamma = gamma;
  rep.optimum = top;
  return rep;
}

// ---------------------------------------------------------------------------
// Best of a random sample

template <Scalar T>
struct SampleResult {
  Permutation best = Permutation::identity(1);
  T best_value{};  // shifted
  long draws = 0;
  std::uint64_t seed = 0;
  std::optional<T> target;  // on f₀
  long hits = 0;            // draws with f₀ ≥ target
  double fraction = 0.0;
  std::vector<T> values;    // shifted values in draw order, when kept
};

/// N uniform draws; the first draw attaining the maximum wins.
template <Scalar T>
SampleResult<T> best_of_sample(const QapInstance<T>& inst, long draws, std::uint64_t seed,
                               std::optional<T> target = std::nullopt, bool keep_values = false) {
  if (draws < 1) throw std::invalid_argument("best_of_sample: N must be >= 1");
  Rng rng(seed);
  SampleResult<T> res;
  res.draws = draws;
  res.seed = seed;
  res.target = target;
  for (long d = 0; d < draws; ++d) {
    Permutation sigma = random_permutation(inst.n(), rng);
    T v = inst.evaluate(sigma) - inst.mean();
    if (target && v >= *target) ++res.hits;
    if (d == 0 || v > res.best_value) {
      res.best = std::move(sigma);
      res.best_value = v;
    }
    if (keep_values) res.values.push_back(std::move(v));
  }
  res.fraction = static_cast<double>(res.hits) / static_cast<double>(draws);
  return res;
}

// ---------------------------------------------------------------------------
// Spike class functions

/// (−n(p−1) + p(p+1) + 2t − 4)/(2n − 4): mean zero, maximum 1 at e.
template <Scalar T>
ClassFunction<T> spike_fixed_points_function(int n) {
  if (n < 5) throw std::out_of_range("spike function needs n >= 5");
  const long d = 2L * n - 4;
  return ClassFunction<T>::span(
      n, coefficients_from_polynomial<T>(scalar<T>(1, d), scalar<T>(1 - n, d), scalar<T>(2, d),
                                         scalar<T>(n - 4, d)));
}

/// (p² − mp + 2t + m − 3)/(n² − nm + m − 3) for 3 ≤ m ≤ n.
template <Scalar T>
ClassFunction<T> spike_scarce_function(int n, int m) {
  if (n < 5) throw std::out_of_range("spike function needs n >= 5");
  if (m < 3 || m > n) throw std::out_of_range("spike function needs 3 <= m <= n");
  const long d = static_cast<long>(n) * n - static_cast<long>(n) * m + m - 3;
  return ClassFunction<T>::span(
      n, coefficients_from_polynomial<T>(scalar<T>(1, d), scalar<T>(-m, d), scalar<T>(2, d),
                                         scalar<T>(m - 3, d)));
}

/// Weights (α₁, α₂) of the scarce spike function on the symmetric rays
/// (r1, r2e): α₁ = (n² − nm − 4n + 3m + 3)/D, α₂ = (4n − 2m − 6)/D.
inline std::pair<Rational, Rational> spike_scarce_ray_weights(int n, int m) {
  const long nn = n, mm = m;
  const BigInt d = nn * nn - nn * mm + mm - 3;
  return {ratio(BigInt(nn * nn - nn * mm - 4 * nn + 3 * mm + 3), d),
          ratio(BigInt(4 * nn - 2 * mm - 6), d)};
}

/// Upper bound (−nk + k² + 3n − k − 4)/(2n − 4) on the average of the spike
/// objective over U(e,k).
inline Rational spike_ring_bound(int n, int k) {
  const long nn = n, kk = k;
  return ratio(BigInt(-nn * kk + kk * kk + 3 * nn - kk - 4), BigInt(2 * nn - 4));
}

/// 1/m!: P{σ has at least m fixed points} ≤ C(n,m)(n−m)!/n!.
inline Rational scarcity_bound(int n, int m) {
  if (m < 3 || m > n) throw std::out_of_range("scarcity_bound needs 3 <= m <= n");
  return ratio(BigInt(1), factorial(static_cast<unsigned long>(m)));
}

/// Classes of S_n (given by their statistics, identity included) on which a
/// span-mode class function exceeds `cut`.
template <Scalar T>
std::vector<CycleStats> classes_exceeding(const ClassFunction<T>& cf, const T& cut) {
  std::vector<CycleStats> out;
  const int n = cf.n();
  std::vector<CycleStats> all = feasible_pt_pairs(n);
  all.push_back({n, 0});
  for (const auto& s : all)
    if (cf.coefficients().value(s.p, s.t) > cut) out.push_back(s);
  return out;
}

}  // namespace qapdist
