#pragma once

// Exhaustive enumeration over S_n and over Hamming rings.

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qapdist/permutation.hpp"

namespace qapdist {

/// Visits every permutation of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  do {
    fn(std::span<const int>(images));
  } while (std::next_permutation(images.begin(), images.end()));
}

/// Map-reduce over S_n. The work is split into n chunks by the image of the
/// first point; each chunk is visited in lexicographic order into its own
/// accumulator and the chunks are merged in index order, so the result does
/// not depend on `jobs`.
template <class Acc, class Visit, class Merge>
Acc reduce_permutations(int n, int jobs, const Acc& init, Visit visit, Merge merge) {
  if (n < 1) throw std::invalid_argument("reduce_permutations: n must be >= 1");
  std::vector<Acc> partial(static_cast<std::size_t>(n), init);

  auto run_chunk = [&](int first) {
    std::vector<int> images;
    images.reserve(static_cast<std::size_t>(n));
    images.push_back(first);
    for (int v = 0; v < n; ++v)
      if (v != first) images.push_back(v);
    Acc& acc = partial[static_cast<std::size_t>(first)];
    do {
      visit(acc, std::span<const int>(images));
    } while (std::next_permutation(images.begin() + 1, images.end()));
  };

  const int workers = std::clamp(jobs, 1, n);
  if (workers == 1) {
    for (int c = 0; c < n; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int c = next++; c < n; c = next++) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  Acc result = std::move(partial[0]);
  for (int c = 1; c < n; ++c) merge(result, std::move(partial[static_cast<std::size_t>(c)]));
  return result;
}

namespace detail {

/// Advances `a` (a permutation of 0..k-1) to the next derangement in
/// lexicographic order, skipping whole blocks that share a fixed-point prefix.
/// When `include_current` is set the current arrangement is a candidate.
inline bool next_derangement(std::vector<int>& a, bool include_current) {
  if (!include_current && !std::next_permutation(a.begin(), a.end())) return false;
  const auto k = a.size();
  for (;;) {
    std::size_t fixed = 0;
    while (fixed < k && a[fixed] != static_cast<int>(fixed)) ++fixed;
    if (fixed == k) return true;
    std::sort(a.begin() + static_cast<std::ptrdiff_t>(fixed) + 1, a.end(), std::greater<>());
    if (!std::next_permutation(a.begin(), a.end())) return false;
  }
}

inline bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace detail

/// Single-pass stream over U(τ, k) = {σ : dist(σ, τ) = k}: every k-subset of
/// moved points combined with every derangement of that subset, σ = τ∘δ.
class RingEnumerator {
 public:
  RingEnumerator(Permutation center, int k) : center_(std::move(center)), k_(k) {
    const int n = center_.size();
    if (k < 0 || k > n) throw std::out_of_range("ring index out of range");
    moved_.resize(static_cast<std::size_t>(k));
    std::iota(moved_.begin(), moved_.end(), 0);
    arrangement_.resize(static_cast<std::size_t>(k));
    std::iota(arrangement_.begin(), arrangement_.end(), 0);
    done_ = !detail::next_derangement(arrangement_, true);
  }

  std::optional<Permutation> next() {
    if (done_) return std::nullopt;
    const int n = center_.size();
    std::vector<int> delta(static_cast<std::size_t>(n));
    std::iota(delta.begin(), delta.end(), 0);
    for (int i = 0; i < k_; ++i)
      delta[static_cast<std::size_t>(moved_[static_cast<std::size_t>(i)])] =
          moved_[static_cast<std::size_t>(arrangement_[static_cast<std::size_t>(i)])];
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      images[static_cast<std::size_t>(i)] = center_[delta[static_cast<std::size_t>(i)]];
    advance();
    return Permutation::from_zero_based(std::move(images));
  }

 private:
  void advance() {
    if (detail::next_derangement(arrangement_, false)) return;
    if (!detail::next_combination(moved_, center_.size())) {
      done_ = true;
      return;
    }
    std::iota(arrangement_.begin(), arrangement_.end(), 0);
    done_ = !detail::next_derangement(arrangement_, true);
  }

  Permutation center_;
  int k_;
  std::vector<int> moved_;
  std::vector<int> arrangement_;
  bool done_ = false;
};

template <class Fn>
void for_each_in_ring(const Permutation& center, int k, Fn&& fn) {
  RingEnumerator ring(center, k);
  while (auto sigma = ring.next()) fn(*sigma);
}

}  // namespace qapdist
