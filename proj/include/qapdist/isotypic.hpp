#pragma once

// Isotypic decomposition of Mat_n under simultaneous row/column permutation,
// the four characters that appear in it, and central projections of QAP
// objectives onto class functions.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qapdist/counting.hpp"
#include "qapdist/enumerate.hpp"
#include "qapdist/instance.hpp"
#include "qapdist/matrix.hpp"
#include "qapdist/random.hpp"

namespace qapdist {

/// The irreducible constituents of Mat_n: (n), (n−1,1), (n−2,2), (n−2,1,1).
enum class Irrep { Trivial = 0, Standard = 1, TwoRow = 2, Hook = 3 };

inline constexpr std::array<Irrep, 4> kIrreps{Irrep::Trivial, Irrep::Standard, Irrep::TwoRow,
                                              Irrep::Hook};

/// Partition label as used in serialized output.
inline const char* label(Irrep r) {
  switch (r) {
    case Irrep::Trivial: return "n";
    case Irrep::Standard: return "n-1,1";
    case Irrep::TwoRow: return "n-2,2";
    case Irrep::Hook: return "n-2,1,1";
  }
  return "?";
}

inline Irrep irrep_from_label(const std::string& s) {
  for (Irrep r : kIrreps)
    if (s == label(r)) return r;
  throw std::invalid_argument("unknown character label: " + s);
}

/// Character value as a polynomial in (p, t); no feasibility check.
template <Scalar T>
T character_value(Irrep which, int p, int t) {
  switch (which) {
    case Irrep::Trivial: return T(1);
    case Irrep::Standard: return T(p - 1);
    case Irrep::TwoRow: return scalar<T>(2L * t + static_cast<long>(p) * p - 3L * p, 2);
    case Irrep::Hook: return scalar<T>(static_cast<long>(p) * p - 3L * p - 2L * t + 2, 2);
  }
  throw std::logic_error("bad irrep");
}

/// χ_λ on the class with p fixed points and t two-cycles in S_n.
template <Scalar T>
T character(Irrep which, int p, int t, int n) {
  if (n < 4) throw std::invalid_argument("characters are defined here for n >= 4");
  if (!is_attainable(n, p, t))
    throw std::invalid_argument("no permutation in S_" + std::to_string(n) + " has p=" +
                                std::to_string(p) + ", t=" + std::to_string(t));
  return character_value<T>(which, p, t);
}

/// Dimension of the isotypic subspace of Mat_n.
inline int isotypic_dimension(Irrep which, int n) {
  switch (which) {
    case Irrep::Trivial: return 2;
    case Irrep::Standard: return 3 * n - 3;
    case Irrep::TwoRow: return (n * n - 3 * n) / 2;
    case Irrep::Hook: return (n * n - 3 * n) / 2 + 1;
  }
  return 0;
}

/// Coefficients of a function on the four characters.
template <Scalar T>
struct CharacterCoefficients {
  std::array<T, 4> c{T(0), T(0), T(0), T(0)};

  T& operator[](Irrep r) { return c[static_cast<std::size_t>(r)]; }
  const T& operator[](Irrep r) const { return c[static_cast<std::size_t>(r)]; }

  T value(int p, int t) const {
    T v(0);
    for (Irrep r : kIrreps) v += (*this)[r] * character_value<T>(r, p, t);
    return v;
  }
  T at_identity(int n) const { return value(n, 0); }

  CharacterCoefficients& operator+=(const CharacterCoefficients& o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  CharacterCoefficients& operator*=(const T& s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend CharacterCoefficients operator+(CharacterCoefficients a, const CharacterCoefficients& b) {
    return a += b;
  }
  friend CharacterCoefficients operator*(CharacterCoefficients a, const T& s) { return a *= s; }
  friend bool operator==(const CharacterCoefficients&, const CharacterCoefficients&) = default;
};

/// Coefficients of g(p,t) = p2·p² + p1·p + tc·t + c0. Uses p = χ₁₁+1,
/// p² = (χ₂₂+χ₂₁₁) + 3p − 1 and t = (χ₂₂ − χ₂₁₁ + 1)/2.
template <Scalar T>
CharacterCoefficients<T> coefficients_from_polynomial(const T& p2, const T& p1, const T& tc,
                                                      const T& c0) {
  CharacterCoefficients<T> out;
  const T half_t = tc / T(2);
  out[Irrep::TwoRow] = p2 + half_t;
  out[Irrep::Hook] = p2 - half_t;
  out[Irrep::Standard] = T(3) * p2 + p1;
  out[Irrep::Trivial] = T(2) * p2 + p1 + half_t + c0;
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition of matrices

template <Scalar T>
struct IsotypicDecomposition {
  DenseMatrix<T> trivial;   // L_n
  DenseMatrix<T> standard;  // L_{n-1,1}
  DenseMatrix<T> two_row;   // L_{n-2,2}
  DenseMatrix<T> hook;      // L_{n-2,1,1}

  const DenseMatrix<T>& component(Irrep r) const {
    switch (r) {
      case Irrep::Trivial: return trivial;
      case Irrep::Standard: return standard;
      case Irrep::TwoRow: return two_row;
      case Irrep::Hook: return hook;
    }
    throw std::logic_error("bad irrep");
  }
  DenseMatrix<T> sum() const { return trivial + standard + two_row + hook; }
};

/// The three pieces of an L_{n-1,1} matrix: identical zero-sum rows
/// (a_ij = row[j]), identical zero-sum columns (a_ij = column[i]) and a
/// zero-sum diagonal.
template <Scalar T>
struct StandardPieces {
  std::vector<T> row;
  std::vector<T> column;
  std::vector<T> diagonal;

  DenseMatrix<T> assemble() const {
    const int n = static_cast<int>(row.size());
    DenseMatrix<T> m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m(i, j) = row[static_cast<std::size_t>(j)] + column[static_cast<std::size_t>(i)];
        if (i == j) m(i, j) += diagonal[static_cast<std::size_t>(i)];
      }
    return m;
  }
};

namespace detail {

/// Least-squares fit of the off-diagonal entries by u_i + v_j (gauge Σu = Σv).
template <Scalar T>
std::pair<std::vector<T>, std::vector<T>> fit_row_column(const DenseMatrix<T>& a) {
  const int n = a.n();
  std::vector<T> rows(static_cast<std::size_t>(n), T(0)), cols(static_cast<std::size_t>(n), T(0));
  T total(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      rows[static_cast<std::size_t>(i)] += a(i, j);
      cols[static_cast<std::size_t>(j)] += a(i, j);
      total += a(i, j);
    }
  const T uv_sum = total / T(n - 1);
  std::vector<T> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    T s = (rows[i] + cols[i] - uv_sum) / T(n - 2);
    T d = (rows[i] - cols[i]) / T(n);
    u[i] = (s + d) / T(2);
    v[i] = (s - d) / T(2);
  }
  return {std::move(u), std::move(v)};
}

}  // namespace detail

/// Orthogonal decomposition A = A_n + A_{n-1,1} + A_{n-2,2} + A_{n-2,1,1}.
///
/// A_n keeps the mean diagonal and mean off-diagonal value. A_n + A_{n-1,1}
/// is the projection onto matrices of the form u_i + v_j off the diagonal
/// with a free diagonal; the residual has zero diagonal and zero line sums
/// and splits into its symmetric and skew parts.
template <Scalar T>
IsotypicDecomposition<T> decompose(const DenseMatrix<T>& a) {
  const int n = a.n();
  if (n < 4) throw std::invalid_argument("isotypic decomposition needs n >= 4");
  T diag(0), off(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) (i == j ? diag : off) += a(i, j);
  const T diag_mean = diag / T(n);
  const T off_mean = off / T(n * (n - 1));

  IsotypicDecomposition<T> out;
  out.trivial = DenseMatrix<T>(n, off_mean);
  for (int i = 0; i < n; ++i) out.trivial(i, i) = diag_mean;

  auto [u, v] = detail::fit_row_column(a);
  DenseMatrix<T> low(n);  // projection onto L_n + L_{n-1,1}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      low(i, j) = i == j ? a(i, i) : T(u[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(j)]);
  out.standard = low - out.trivial;

  const DenseMatrix<T> residual = a - low;
  const DenseMatrix<T> residual_t = residual.transpose();
  const T half = scalar<T>(1, 2);
  out.two_row = (residual + residual_t) * half;
  out.hook = (residual - residual_t) * half;
  return out;
}

/// Splits a matrix of L_{n-1,1} into its row, column and diagonal pieces.
template <Scalar T>
StandardPieces<T> split_standard(const DenseMatrix<T>& x) {
  const int n = x.n();
  auto [u, v] = detail::fit_row_column(x);
  T su(0), sv(0);
  for (int i = 0; i < n; ++i) {
    su += u[static_cast<std::size_t>(i)];
    sv += v[static_cast<std::size_t>(i)];
  }
  StandardPieces<T> pieces;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    pieces.column.push_back(u[k] - su / T(n));
    pieces.row.push_back(v[k] - sv / T(n));
  }
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    pieces.diagonal.push_back(x(i, i) - pieces.column[k] - pieces.row[k]);
  }
  return pieces;
}

template <Scalar T>
bool in_trivial_subspace(const DenseMatrix<T>& x, double tol = 0.0) {
  const int n = x.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const T& ref = i == j ? x(0, 0) : x(0, 1);
      if (!near<T>(x(i, j), ref, tol)) return false;
    }
  return true;
}

template <Scalar T>
bool in_standard_subspace(const DenseMatrix<T>& x, double tol = 0.0) {
  const StandardPieces<T> pieces = split_standard(x);
  T trace(0);
  for (const auto& d : pieces.diagonal) trace += d;
  if (sign_of<T>(trace, tol) != 0) return false;
  const DenseMatrix<T> back = pieces.assemble();
  return is_zero_matrix(DenseMatrix<T>(back - x), tol);
}

template <Scalar T>
bool in_two_row_subspace(const DenseMatrix<T>& x, double tol = 0.0) {
  return is_symmetric(x, tol) && has_zero_diagonal(x, tol) && has_zero_line_sums(x, tol);
}

template <Scalar T>
bool in_hook_subspace(const DenseMatrix<T>& x, double tol = 0.0) {
  return is_skew_symmetric(x, tol) && has_zero_line_sums(x, tol);
}

template <Scalar T>
bool in_subspace(Irrep which, const DenseMatrix<T>& x, double tol = 0.0) {
  switch (which) {
    case Irrep::Trivial: return in_trivial_subspace(x, tol);
    case Irrep::Standard: return in_standard_subspace(x, tol);
    case Irrep::TwoRow: return in_two_row_subspace(x, tol);
    case Irrep::Hook: return in_hook_subspace(x, tol);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Class functions

enum class ClassFunctionMode { Exact, Span };

/// A function on S_n constant on conjugacy classes: either a table with one
/// value per cycle type, or a combination of the four characters.
template <Scalar T>
class ClassFunction {
 public:
  static ClassFunction span(int n, CharacterCoefficients<T> coeffs) {
    if (n < 4) throw std::invalid_argument("span-mode class functions need n >= 4");
    ClassFunction f;
    f.n_ = n;
    f.mode_ = ClassFunctionMode::Span;
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  static ClassFunction table(int n, std::map<CycleType, T> values) {
    for (const auto& ct : partitions(n))
      if (!values.contains(ct))
        throw std::invalid_argument("class function table is missing a cycle type");
    if (values.size() != partitions(n).size())
      throw std::invalid_argument("class function table has entries that are not partitions of n");
    ClassFunction f;
    f.n_ = n;
    f.mode_ = ClassFunctionMode::Exact;
    f.values_ = std::move(values);
    return f;
  }

  int n() const { return n_; }
  ClassFunctionMode mode() const { return mode_; }
  bool is_span() const { return mode_ == ClassFunctionMode::Span; }

  const CharacterCoefficients<T>& coefficients() const {
    if (!is_span()) throw std::logic_error("exact-mode class function has no coefficients");
    return coeffs_;
  }
  const std::map<CycleType, T>& values() const& {
    if (is_span()) throw std::logic_error("span-mode class function has no table");
    return values_;
  }
  void values() && = delete;

  T operator()(const CycleType& ct) const {
    if (ct.n() != n_) throw std::invalid_argument("cycle type is not a partition of n");
    if (is_span()) {
      const CycleStats s = stats_of(ct);
      return coeffs_.value(s.p, s.t);
    }
    auto it = values_.find(ct);
    if (it == values_.end()) throw std::out_of_range("missing class in class function");
    return it->second;
  }

  T operator()(const CycleStats& s) const {
    if (!is_span())
      throw std::invalid_argument("exact-mode class functions need a full cycle type");
    if (!is_attainable(n_, s.p, s.t)) throw std::invalid_argument("infeasible cycle statistics");
    return coeffs_.value(s.p, s.t);
  }

  T at_identity() const { return (*this)(CycleType{std::vector<int>(static_cast<std::size_t>(n_), 1)}); }

 private:
  int n_ = 0;
  ClassFunctionMode mode_ = ClassFunctionMode::Span;
  CharacterCoefficients<T> coeffs_;
  std::map<CycleType, T> values_;
};

template <Scalar T>
T evaluate_class_function(const ClassFunction<T>& cf, const CycleType& ct) {
  return cf(ct);
}

template <Scalar T>
T evaluate_class_function(const ClassFunction<T>& cf, const CycleStats& stats) {
  return cf(stats);
}

/// Largest n for which class averages are computed by full enumeration.
inline constexpr int kExactProjectionMaxN = 10;

namespace detail {

inline std::uint64_t cycle_key(const CycleType& ct) {
  std::uint64_t key = 0;
  for (int part : ct.parts) key = key * 16 + static_cast<std::uint64_t>(part);
  return key;
}

inline std::uint64_t cycle_key(std::span<const int> images, std::vector<int>& scratch,
                               std::vector<char>& seen) {
  const std::size_t n = images.size();
  scratch.clear();
  seen.assign(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t i = s; !seen[i]; i = static_cast<std::size_t>(images[i])) {
      seen[i] = 1;
      ++len;
    }
    scratch.push_back(len);
  }
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  std::uint64_t key = 0;
  for (int part : scratch) key = key * 16 + static_cast<std::uint64_t>(part);
  return key;
}

}  // namespace detail

/// Class average of an arbitrary function of permutations over every
/// conjugacy class of S_n, by one pass of enumeration.
template <Scalar T, class Fn>
ClassFunction<T> class_averages(int n, Fn&& f, int jobs = 1) {
  if (n < 1 || n > kExactProjectionMaxN)
    throw std::out_of_range("exact class averages are limited to n <= " +
                            std::to_string(kExactProjectionMaxN));
  const std::vector<CycleType> types = partitions(n);
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t k = 0; k < types.size(); ++k) index.emplace(detail::cycle_key(types[k]), k);

  struct Acc {
    std::vector<T> sums;
    std::vector<int> scratch;
    std::vector<char> seen;
  };
  Acc init{std::vector<T>(types.size(), T(0)), {}, {}};
  Acc total = reduce_permutations(
      n, jobs, init,
      [&](Acc& acc, std::span<const int> s) {
        const std::uint64_t key = detail::cycle_key(s, acc.scratch, acc.seen);
        acc.sums[index.at(key)] += f(s);
      },
      [](Acc& into, Acc&& from) {
        for (std::size_t k = 0; k < into.sums.size(); ++k) into.sums[k] += from.sums[k];
      });

  std::map<CycleType, T> values;
  for (std::size_t k = 0; k < types.size(); ++k)
    values.emplace(types[k], total.sums[k] / from_bigint<T>(class_size(types[k])));
  return ClassFunction<T>::table(n, std::move(values));
}

/// g(ρ) = average of f over the conjugacy class of ρ, for every class.
template <Scalar T>
ClassFunction<T> central_projection_exact(const QapInstance<T>& inst, int jobs = 1) {
  return class_averages<T>(
      inst.n(), [&](std::span<const int> s) { return inst.evaluate(s); }, jobs);
}

/// Closed-form central projection of a matrix-pair objective:
/// c_λ = ⟨B, A_λ⟩ / χ_λ(e). O(n²).
template <Scalar T>
ClassFunction<T> central_projection_kb(const QapInstance<T>& inst) {
  if (!inst.is_matrix_pair())
    throw std::invalid_argument("closed-form projection needs a matrix-pair instance");
  const int n = inst.n();
  if (n < 4) throw std::invalid_argument("closed-form projection needs n >= 4");
  const IsotypicDecomposition<T> parts = decompose(inst.a());
  CharacterCoefficients<T> coeffs;
  for (Irrep r : kIrreps)
    coeffs[r] = inner(inst.b(), parts.component(r)) / character_value<T>(r, n, 0);
  return ClassFunction<T>::span(n, coeffs);
}

template <Scalar T>
struct SpanProjection {
  CharacterCoefficients<T> coeffs;
  /// (1/n!) Σ_σ (cf − proj)²: squared distance from the character span.
  T residual_sq{};
};

/// Orthogonal projection of a tabulated class function onto the span of the
/// four characters, using class sizes as weights.
template <Scalar T>
SpanProjection<T> character_coefficients(const ClassFunction<T>& cf) {
  const int n = cf.n();
  if (n < 4) throw std::invalid_argument("character projection needs n >= 4");
  if (cf.is_span()) return {cf.coefficients(), T(0)};
  SpanProjection<T> out;
  for (Irrep r : kIrreps) {
    T num(0), den(0);
    for (const auto& [ct, value] : cf.values()) {
      const CycleStats s = stats_of(ct);
      const T weight = from_bigint<T>(class_size(ct));
      const T chi = character_value<T>(r, s.p, s.t);
      num += weight * value * chi;
      den += weight * chi * chi;
    }
    out.coeffs[r] = num / den;
  }
  T sq(0);
  for (const auto& [ct, value] : cf.values()) {
    const CycleStats s = stats_of(ct);
    const T diff = value - out.coeffs.value(s.p, s.t);
    sq += from_bigint<T>(class_size(ct)) * diff * diff;
  }
  out.residual_sq = sq / from_bigint<T>(factorial(static_cast<unsigned long>(n)));
  return out;
}

/// Class-size-weighted mean of a class function over S_n.
template <Scalar T>
T class_function_mean(const ClassFunction<T>& cf) {
  const int n = cf.n();
  T total(0);
  for (const auto& ct : partitions(n)) total += from_bigint<T>(class_size(ct)) * cf(ct);
  return total / from_bigint<T>(factorial(static_cast<unsigned long>(n)));
}

/// Σ_σ χ_a(σ)χ_b(σ) over S_n via class sizes.
inline BigInt character_inner_product(Irrep a, Irrep b, int n) {
  Rational total = 0;
  for (const auto& ct : partitions(n)) {
    const CycleStats s = stats_of(ct);
    total += Rational(class_size(ct)) * character_value<Rational>(a, s.p, s.t) *
             character_value<Rational>(b, s.p, s.t);
  }
  if (total.get_den() != 1) throw std::logic_error("non-integral character inner product");
  return total.get_num();
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

/// Monte Carlo class average: mean of f(ω⁻¹ρω) over uniformly random ω.
template <Scalar T>
Estimate estimate_class_average(const QapInstance<T>& inst, const Permutation& rho, long samples,
                                Rng& rng) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  if (rho.size() != inst.n()) throw std::invalid_argument("permutation size mismatch");
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Permutation omega = random_permutation(inst.n(), rng);
    const double v = to_double(inst.evaluate(conjugate(rho, omega)));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, (sum_sq - samples * mean * mean) / static_cast<double>(samples - 1));
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace qapdist
