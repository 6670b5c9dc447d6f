#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qapdist {

/// A bijection on {1..n}. Stored 0-based; the 1-based view is used for I/O.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int n) {
    if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 0);
    return Permutation(std::move(images), Trusted{});
  }

  /// Validates that `images` (0-based) is a bijection.
  static Permutation from_zero_based(std::vector<int> images) {
    check_bijection(images, 0);
    return Permutation(std::move(images), Trusted{});
  }

  static Permutation from_one_based(std::span<const int> images) {
    check_bijection(images, 1);
    std::vector<int> zero(images.begin(), images.end());
    for (int& v : zero) --v;
    return Permutation(std::move(zero), Trusted{});
  }

  /// Product of disjoint 1-based cycles, e.g. {{1,2},{3,4,5}}.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 0);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        int from = cycle[i] - 1;
        int to = cycle[(i + 1) % cycle.size()] - 1;
        if (from < 0 || from >= n || used[static_cast<std::size_t>(from)])
          throw std::invalid_argument("cycles must be disjoint and within 1..n");
        used[static_cast<std::size_t>(from)] = true;
        images[static_cast<std::size_t>(from)] = to;
      }
    }
    return Permutation(std::move(images), Trusted{});
  }

  int size() const { return static_cast<int>(images_.size()); }

  /// 0-based image.
  int operator[](int i) const { return images_[static_cast<std::size_t>(i)]; }

  /// 1-based image, matching the external convention.
  int at(int i) const {
    if (i < 1 || i > size()) throw std::out_of_range("permutation index out of range");
    return images_[static_cast<std::size_t>(i - 1)] + 1;
  }

  std::span<const int> images() const { return images_; }

  std::vector<int> one_based() const {
    std::vector<int> out(images_);
    for (int& v : out) ++v;
    return out;
  }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (images_[static_cast<std::size_t>(i)] != i) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Trusted {};
  Permutation(std::vector<int> images, Trusted) : images_(std::move(images)) {}

  template <class Range>
  static void check_bijection(const Range& images, int base) {
    const int n = static_cast<int>(std::size(images));
    if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images) {
      int k = v - base;
      if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)])
        throw std::invalid_argument("not a bijection on 1.." + std::to_string(n));
      seen[static_cast<std::size_t>(k)] = true;
    }
  }

  std::vector<int> images_;
};

inline std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  os << '[';
  for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i] + 1;
  return os << ']';
}

namespace detail {
inline void require_same_size(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("permutation size mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
}
}  // namespace detail

/// (a∘b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  detail::require_same_size(a, b);
  std::vector<int> out(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(i)] = a[b[i]];
  return Permutation::from_zero_based(std::move(out));
}

inline Permutation inverse(const Permutation& a) {
  std::vector<int> out(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a[i])] = i;
  return Permutation::from_zero_based(std::move(out));
}

/// Number of points where `a` and `b` disagree. Never equals 1.
inline int hamming_distance(const Permutation& a, const Permutation& b) {
  detail::require_same_size(a, b);
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// ω⁻¹σω.
inline Permutation conjugate(const Permutation& sigma, const Permutation& omega) {
  return compose(inverse(omega), compose(sigma, omega));
}

/// An integer partition of n, parts in non-increasing order.
struct CycleType {
  std::vector<int> parts;

  int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }

  int count(int length) const {
    return static_cast<int>(std::count(parts.begin(), parts.end(), length));
  }

  static CycleType from_parts(std::vector<int> parts) {
    for (int p : parts)
      if (p < 1) throw std::invalid_argument("cycle lengths must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return CycleType{std::move(parts)};
  }

  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType&, const CycleType&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const CycleType& ct) {
  os << '(';
  for (std::size_t i = 0; i < ct.parts.size(); ++i) os << (i ? "," : "") << ct.parts[i];
  return os << ')';
}

/// p = number of fixed points, t = number of 2-cycles.
struct CycleStats {
  int p = 0;
  int t = 0;

  friend bool operator==(const CycleStats&, const CycleStats&) = default;
  friend auto operator<=>(const CycleStats&, const CycleStats&) = default;
};

inline CycleStats stats_of(const CycleType& ct) { return {ct.count(1), ct.count(2)}; }

inline CycleType cycle_type(std::span<const int> images) {
  const std::size_t n = images.size();
  std::vector<int> parts;
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (std::size_t i = start; !seen[i]; i = static_cast<std::size_t>(images[i])) {
      seen[i] = true;
      ++len;
    }
    parts.push_back(len);
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return CycleType{std::move(parts)};
}

inline CycleType cycle_type(const Permutation& sigma) { return cycle_type(sigma.images()); }

inline CycleStats cycle_stats(std::span<const int> images) {
  CycleStats s;
  const int n = static_cast<int>(images.size());
  for (int i = 0; i < n; ++i) {
    int j = images[static_cast<std::size_t>(i)];
    if (j == i) {
      ++s.p;
    } else if (j > i && images[static_cast<std::size_t>(j)] == i) {
      ++s.t;
    }
  }
  return s;
}

inline CycleStats cycle_stats(const Permutation& sigma) { return cycle_stats(sigma.images()); }

}  // namespace qapdist
