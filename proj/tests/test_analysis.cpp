#include <gtest/gtest.h>

#include "support/helpers.hpp"

using namespace qapdist;
using testing_support::frac;
using testing_support::oracle_value;
using testing_support::random_rational_pair;
using testing_support::to_perm;

namespace {

using Q = Rational;

// Random symmetric distances with zero diagonal, as a TSP-style B.
DenseMatrix<Q> random_distances(int n, Rng& rng, bool symmetric = true) {
  DenseMatrix<Q> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || (symmetric && j < i)) continue;
      b(i, j) = uniform_int(rng, 1, 20);
      if (symmetric) b(j, i) = b(i, j);
    }
  return b;
}

struct BruteOptimum {
  oracle::Perm argmax;
  Q value;
};

BruteOptimum brute_optimum(const QapInstance<Q>& inst) {
  BruteOptimum best{{}, 0};
  bool set = false;
  oracle::for_each_perm(inst.n(), [&](const oracle::Perm& s) {
    const Q v = oracle_value(inst, s);
    if (!set || v > best.value) best = {s, v}, set = true;
  });
  return best;
}

std::vector<Q> brute_ring_averages(const QapInstance<Q>& inst, const oracle::Perm& center) {
  const int n = inst.n();
  const Q mean = oracle::brute_mean(n, [&](const oracle::Perm& s) { return oracle_value(inst, s); });
  std::vector<Q> sums(static_cast<std::size_t>(n) + 1);
  std::vector<long> counts(static_cast<std::size_t>(n) + 1);
  oracle::for_each_perm(n, [&](const oracle::Perm& s) {
    const auto k = static_cast<std::size_t>(oracle::hamming(s, center));
    sums[k] += oracle_value(inst, s) - mean;
    ++counts[k];
  });
  for (std::size_t k = 0; k < sums.size(); ++k)
    if (counts[k]) sums[k] /= counts[k];
  return sums;
}

QapInstance<Q> constant_instance(int n) {
  return QapInstance<Q>::matrix_pair(DenseMatrix<Q>(n, Q(2)), DenseMatrix<Q>(n, Q(3)));
}

}  // namespace

TEST(Argmax, MatchesBruteForce) {
  Rng rng(51);
  for (int n = 3; n <= 7; ++n) {
    const auto inst = random_rational_pair(n, rng);
    const auto opt = argmax_enumerate(inst);
    const auto brute = brute_optimum(inst);
    EXPECT_EQ(opt.value, brute.value);
    EXPECT_EQ(to_perm(opt.argmax), brute.argmax);
  }
  EXPECT_TRUE(argmax_enumerate(constant_instance(5)).argmax.is_identity());
  EXPECT_THROW(argmax_enumerate(constant_instance(11)), std::out_of_range);
}

TEST(Argmax, IndependentOfJobCount) {
  Rng rng(52);
  const auto inst = random_rational_pair(8, rng);
  const auto one = argmax_enumerate(inst, 1);
  const auto four = argmax_enumerate(inst, 4);
  EXPECT_EQ(one.argmax, four.argmax);
  EXPECT_EQ(one.value, four.value);
}

TEST(Rings, ConstantInstanceIsFlat) {
  const auto prof = ring_profile(constant_instance(6), Permutation::identity(6));
  for (const auto& v : prof.averages) EXPECT_EQ(v, 0);
  EXPECT_TRUE(prof.empty_ring(1));
  EXPECT_EQ(prof.averages.size(), 7u);
}

TEST(Rings, MatchBruteForceAndZeroMean) {
  Rng rng(53);
  for (int n = 4; n <= 7; ++n) {
    const auto inst = random_rational_pair(n, rng);
    const Permutation center = random_permutation(n, rng);
    const auto prof = ring_profile(inst, center);
    EXPECT_EQ(prof.averages, brute_ring_averages(inst, to_perm(center))) << n;
    EXPECT_EQ(prof.averages[0], prof.center_value);
    Q total = 0;
    for (int k = 0; k <= n; ++k)
      total += prof.averages[static_cast<std::size_t>(k)] * Q(prof.ring_sizes[static_cast<std::size_t>(k)]);
    EXPECT_EQ(total, 0);
  }
}

TEST(Rings, ExactAndProjectedAgree) {
  Rng rng(54);
  for (int n = 4; n <= 7; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      const auto inst = trial == 2 ? random_generalized_instance<Q>(n, RandomDistribution{}, rng)
                                   : random_rational_pair(n, rng);
      const Permutation center = random_permutation(n, rng);
      const auto exact = ring_profile(inst, center, RingMode::Exact);
      const auto proj = ring_profile(inst, center, RingMode::Projected);
      EXPECT_EQ(exact.averages, proj.averages) << n;
      EXPECT_EQ(exact.thresholds, proj.thresholds);
    }
}

TEST(Rings, SizeLimits) {
  const auto inst = spike_instance<Q>(9);
  EXPECT_THROW(ring_profile(inst, Permutation::identity(9), RingMode::Exact), std::out_of_range);
  EXPECT_NO_THROW(ring_profile(inst, Permutation::identity(9), RingMode::Projected));
  EXPECT_THROW(ring_profile(inst, Permutation::identity(8)), std::invalid_argument);
}

TEST(Bullseye, SymmetricTspPassesEveryRing) {
  Rng rng(55);
  for (int n = 6; n <= 7; ++n) {
    const auto inst = QapInstance<Q>::matrix_pair(symmetric_cycle_matrix<Q>(n), random_distances(n, rng));
    const auto opt = argmax_enumerate(inst);
    const auto rep = verify_bullseye(inst, opt.argmax);
    EXPECT_TRUE(rep.all_pass);
    EXPECT_EQ(rep.rows[0].gap, 0);
    for (const auto& row : rep.rows) {
      if (rep.profile.empty_ring(row.k)) continue;
      EXPECT_EQ(row.threshold, alpha_threshold(n, row.k) * rep.profile.center_value);
      EXPECT_GE(row.average, row.threshold);
    }
  }
}

TEST(Bullseye, RandomInstancesPass) {
  Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_rational_pair(6, rng, RandomKind::Bullseye);
    const auto opt = argmax_enumerate(inst);
    EXPECT_TRUE(verify_bullseye(inst, opt.argmax, RingMode::Projected).all_pass);
    EXPECT_TRUE(verify_bullseye(inst, opt.argmax, RingMode::Exact).all_pass);
  }
}

TEST(Bullseye, Preconditions) {
  Rng rng(57);
  EXPECT_THROW(verify_bullseye(spike_instance<Q>(6), Permutation::identity(6)), std::invalid_argument);
  const auto inst = QapInstance<Q>::matrix_pair(symmetric_cycle_matrix<Q>(6), random_distances(6, rng));
  const auto opt = argmax_enumerate(inst);
  Permutation worst = opt.argmax;
  Q low = inst.evaluate(worst);
  for_each_permutation(6, [&](std::span<const int> s) {
    if (inst.evaluate(s) < low) {
      low = inst.evaluate(s);
      worst = Permutation::from_zero_based({s.begin(), s.end()});
    }
  });
  EXPECT_THROW(verify_bullseye(inst, worst), std::invalid_argument);
}

TEST(Spike, RingAveragesStayBelowBound) {
  for (int n = 6; n <= 8; ++n) {
    const auto inst = spike_instance<Q>(n);
    const auto prof = ring_profile(inst, Permutation::identity(n));
    EXPECT_EQ(inst.mean(), 0);
    EXPECT_EQ(argmax_enumerate(inst).value, 1);
    EXPECT_EQ(prof.center_value, 1);
    for (int k = 2; k <= n; ++k) EXPECT_LE(prof.averages[static_cast<std::size_t>(k)], spike_ring_bound(n, k)) << n << k;
  }
}

TEST(Spike, NegativeRingAtFourForLargerN) {
  EXPECT_EQ(spike_ring_bound(10, 4), frac(-1, 8));
  for (int n : {10, 12}) {
    const auto prof = ring_profile(spike_instance<Q>(n), Permutation::identity(n), RingMode::Projected);
    EXPECT_LE(prof.averages[4], spike_ring_bound(n, 4));
    EXPECT_LT(prof.averages[4], 0);
  }
}

TEST(Spike, ProjectionIsSymmetricRay) {
  for (int n = 6; n <= 8; ++n) {
    const auto inst = spike_instance<Q>(n);
    const auto exact = central_projection_exact(inst);
    const auto ray = ClassFunction<Q>::span(n, extreme_rays<Q>(ConeKind(ConeType::Symmetric, n))["r2e"].coeffs);
    for (const auto& ct : partitions(n)) EXPECT_EQ(exact(ct), ray(ct));
  }
}

TEST(Tail, TrivialThresholds) {
  Rng rng(58);
  const auto inst = random_rational_pair(6, rng);
  Q lo = inst.evaluate(Permutation::identity(6)), hi = lo;
  for_each_permutation(6, [&](std::span<const int> s) {
    lo = std::min(lo, inst.evaluate(s));
    hi = std::max(hi, inst.evaluate(s));
  });
  const auto all = tail_probability_exact(inst, Q(lo - inst.mean() - 1));
  EXPECT_EQ(all.exact_probability(), 1);
  EXPECT_EQ(all.total, 720);
  const auto none = tail_probability_exact(inst, Q(hi - inst.mean() + frac(1, 1000)));
  EXPECT_EQ(none.exact_probability(), 0);
  EXPECT_EQ(tail_probability_exact(inst, Q(hi - inst.mean())).hits, oracle::count_if_perm(6, [&](const oracle::Perm& p) { return oracle_value(inst, p) == hi; }));
}

TEST(Tail, SpikeHalfThreshold) {
  const auto inst = spike_instance<Q>(7);
  const long brute = oracle::count_if_perm(7, [&](const oracle::Perm& s) {
    return inst.b()(s[0], s[1]) == frac(1, 2);
  });
  const auto rep = tail_probability_exact(inst, frac(1, 2));
  EXPECT_EQ(rep.hits, brute);
  EXPECT_EQ(rep.exact_probability(), frac(brute, 5040));
  EXPECT_DOUBLE_EQ(rep.probability, static_cast<double>(brute) / 5040.0);
}

TEST(Tail, MonteCarloCoversExact) {
  const auto inst = spike_instance<Q>(7);
  const auto exact = tail_probability_exact(inst, frac(1, 2));
  Rng a(59), b(59);
  const auto mc = tail_probability_montecarlo(inst, frac(1, 2), 20000, a);
  EXPECT_FALSE(mc.exact);
  EXPECT_EQ(mc.total, 20000);
  EXPECT_LE(mc.ci_low, exact.probability);
  EXPECT_GE(mc.ci_high, exact.probability);
  EXPECT_EQ(tail_probability_montecarlo(inst, frac(1, 2), 20000, b).hits, mc.hits);
  EXPECT_THROW(tail_probability_montecarlo(inst, frac(1, 2), 0, a), std::invalid_argument);
  EXPECT_THROW(tail_probability_exact(spike_instance<Q>(9), Q(0)), std::out_of_range);
}

TEST(Theorems, NamedInstancesPass) {
  Rng rng(60);
  const auto general = random_rational_pair(8, rng);
  const auto pure = QapInstance<Q>::matrix_pair(directed_cycle_matrix<Q>(8), random_distances(8, rng, false));
  const auto bull = QapInstance<Q>::matrix_pair(symmetric_cycle_matrix<Q>(8), random_distances(8, rng));
  const auto r51 = verify_theorem(TailTheorem::General, general, 3, frac(1, 2));
  const auto r31 = verify_theorem(TailTheorem::Pure, pure, 3, frac(1, 2));
  const auto r23 = verify_theorem(TailTheorem::Bullseye, bull, 3, frac(1, 2));
  for (const auto* r : {&r51, &r31, &r23}) {
    EXPECT_TRUE(r->pass);
    EXPECT_TRUE(r->exact);
    EXPECT_EQ(r->total, 40320);
    ASSERT_TRUE(r->bound.has_value());
    EXPECT_GE(r->exact_probability(), *r->bound);
  }
  EXPECT_EQ(r51.theorem, "5.1");
  EXPECT_EQ(*r51.bound, frac(1, 2) * frac(1, 41) / 30);
  EXPECT_FALSE(r51.trivial);
  EXPECT_TRUE(r23.trivial);
  EXPECT_EQ(*r23.bound, 0);
  EXPECT_EQ(r23.threshold, 0);
  // The threshold sits at γβ·f₀(τ) with f₀(τ) from enumeration.
  const auto opt = brute_optimum(general);
  EXPECT_EQ(r51.optimum, opt.value - general.mean());
  EXPECT_EQ(r51.threshold, frac(1, 2) * frac(1, 41) * r51.optimum);
}

TEST(Theorems, Preconditions) {
  Rng rng(61);
  const auto general = random_rational_pair(8, rng);
  EXPECT_THROW(verify_theorem(TailTheorem::Bullseye, general, 3, frac(1, 2)), std::invalid_argument);
  EXPECT_THROW(verify_theorem(TailTheorem::General, general, 4, frac(1, 2)), std::out_of_range);
  EXPECT_THROW(verify_theorem(TailTheorem::General, general, 3, Q(1)), std::out_of_range);
  EXPECT_THROW(verify_theorem(TailTheorem::General, random_rational_pair(7, rng), 3, frac(1, 2)), std::out_of_range);
}

TEST(Sample, SingleDrawAndDeterminism) {
  Rng rng(62);
  const auto inst = random_rational_pair(6, rng);
  Rng replay(77);
  const Permutation first = random_permutation(6, replay);
  const auto one = best_of_sample(inst, 1, 77);
  EXPECT_EQ(one.best, first);
  EXPECT_EQ(one.best_value, inst.evaluate(first) - inst.mean());
  const auto a = best_of_sample(inst, 200, 9, std::optional<Q>(0), true);
  const auto b = best_of_sample(inst, 200, 9, std::optional<Q>(0), true);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values.size(), 200u);
  EXPECT_EQ(a.best_value, *std::max_element(a.values.begin(), a.values.end()));
  const auto first_max = std::find(a.values.begin(), a.values.end(), a.best_value) - a.values.begin();
  Rng walk(9);
  Permutation expect = Permutation::identity(6);
  for (long d = 0; d <= first_max; ++d) expect = random_permutation(6, walk);
  EXPECT_EQ(a.best, expect);
  EXPECT_EQ(a.hits, std::count_if(a.values.begin(), a.values.end(), [](const Q& v) { return v >= 0; }));
  EXPECT_DOUBLE_EQ(a.fraction, static_cast<double>(a.hits) / 200.0);
  EXPECT_THROW(best_of_sample(inst, 0, 1), std::invalid_argument);
  EXPECT_EQ(best_of_sample(constant_instance(5), 50, 3).best_value, 0);
}

TEST(SpikeFunctions, FixedPointFunction) {
  for (int n = 5; n <= 12; ++n) {
    const auto f = spike_fixed_points_function<Q>(n);
    EXPECT_EQ(f.at_identity(), 1);
    EXPECT_EQ(class_function_mean(f), 0);
    if (n % 2 == 0) {
      EXPECT_EQ(f(CycleStats{0, n / 2}), 1);
      EXPECT_EQ(f.coefficients(), extreme_rays<Q>(ConeKind(ConeType::Symmetric, n))["r2e"].coeffs);
    }
    for (const auto& s : feasible_pt_pairs(n)) {
      EXPECT_LE(f(s), 1);
      const int k = n - s.p;
      if (k >= 3 && k <= n - 3) {
        EXPECT_LT(f(s), 0) << n << " p=" << s.p << " t=" << s.t;
      }
    }
  }
  EXPECT_THROW(spike_fixed_points_function<Q>(4), std::out_of_range);
}

TEST(SpikeFunctions, ScarceFunctionIsRayCombination) {
  for (int n = 5; n <= 12; ++n) {
    const auto rays = extreme_rays<Q>(ConeKind(ConeType::Symmetric, n));
    for (int m = 3; m <= n; ++m) {
      const auto f = spike_scarce_function<Q>(n, m);
      EXPECT_EQ(f.at_identity(), 1);
      const auto [a1, a2] = spike_scarce_ray_weights(n, m);
      EXPECT_EQ(rays["r1"].coeffs * a1 + rays["r2e"].coeffs * a2, f.coefficients()) << n << " " << m;
    }
  }
  const auto [a1, a2] = spike_scarce_ray_weights(8, 4);
  EXPECT_EQ(a1, frac(5, 11));
  EXPECT_EQ(a2, frac(6, 11));
  EXPECT_THROW(spike_scarce_function<Q>(8, 2), std::out_of_range);
  EXPECT_THROW(spike_scarce_function<Q>(8, 9), std::out_of_range);
}

TEST(SpikeFunctions, ScarceExceedancesNeedManyFixedPoints) {
  const int n = 12, m = 5;
  const auto f = spike_scarce_function<Q>(n, m);
  const auto over = classes_exceeding(f, frac(2, n));
  EXPECT_FALSE(over.empty());
  for (const auto& s : over) EXPECT_GT(s.p, m);
  for (const auto& s : feasible_pt_pairs(n))
    if (s.p <= m) {
      EXPECT_LE(f(s), frac(2, n));
    }
}

TEST(Scarcity, CountsAndBound) {
  for (int m = 3; m <= 5; ++m) {
    const long brute = oracle::count_if_perm(7, [&](const oracle::Perm& s) { return oracle::pt(s).first >= m; });
    EXPECT_EQ(count_at_least_fixed(7, m), brute);
    EXPECT_LE(frac(brute, 5040), scarcity_bound(7, m));
  }
  EXPECT_EQ(scarcity_bound(7, 7), frac(1, 5040));
  for (int m = 3; m < 9; ++m) EXPECT_GT(scarcity_bound(9, m), scarcity_bound(9, m + 1));
  EXPECT_THROW(scarcity_bound(7, 2), std::out_of_range);
}
