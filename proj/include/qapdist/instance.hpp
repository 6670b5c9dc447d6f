#pragma once

// QAP instances in matrix-pair (Koopmans–Beckmann) and generalized 4-index
// form: objective, mean, shifted objective, relabeling and regime detection.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qapdist/counting.hpp"
#include "qapdist/matrix.hpp"
#include "qapdist/permutation.hpp"
#include "qapdist/random.hpp"
#include "qapdist/scalar.hpp"

namespace qapdist {

enum class InstanceForm { MatrixPair, Generalized };

inline const char* to_string(InstanceForm f) {
  return f == InstanceForm::MatrixPair ? "matrix_pair" : "generalized";
}

namespace detail {

/// Exact-mode fast path: entries scaled to a common integer denominator so
/// that f(σ) = numerator(σ) / scale with int64 accumulation. Only built when
/// the worst-case sum provably fits.
struct IntegerKernel {
  std::vector<std::int64_t> first;   // A (or C)
  std::vector<std::int64_t> second;  // B (empty for generalized)
  BigInt scale;
};

inline std::optional<std::vector<std::int64_t>> scale_to_integers(const std::vector<Rational>& v,
                                                                  BigInt& denom,
                                                                  BigInt& max_abs) {
  denom = 1;
  for (const auto& q : v) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), q.get_den_mpz_t());
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  max_abs = 0;
  for (const auto& q : v) {
    BigInt z = q.get_num() * (denom / q.get_den());
    if (!z.fits_slong_p()) return std::nullopt;
    BigInt mag = abs(z);
    if (mag > max_abs) max_abs = mag;
    out.push_back(z.get_si());
  }
  return out;
}

inline Rational make_rational(std::int64_t num, const BigInt& den) {
  Rational q;
  mpz_set_si(q.get_num_mpz_t(), num);
  mpz_set(q.get_den_mpz_t(), den.get_mpz_t());
  q.canonicalize();
  return q;
}

}  // namespace detail

template <Scalar T>
class QapInstance {
 public:
  struct Pair {
    DenseMatrix<T> a;
    DenseMatrix<T> b;
  };
  struct General {
    Tensor4<T> c;
  };

  static QapInstance matrix_pair(DenseMatrix<T> a, DenseMatrix<T> b) {
    if (a.n() != b.n())
      throw std::invalid_argument("matrix pair dimensions disagree: " + std::to_string(a.n()) +
                                  " vs " + std::to_string(b.n()));
    return QapInstance(Pair{std::move(a), std::move(b)});
  }

  static QapInstance generalized(Tensor4<T> c) { return QapInstance(General{std::move(c)}); }

  int n() const { return n_; }
  InstanceForm form() const {
    return std::holds_alternative<Pair>(form_) ? InstanceForm::MatrixPair : InstanceForm::Generalized;
  }
  bool is_matrix_pair() const { return form() == InstanceForm::MatrixPair; }

  const DenseMatrix<T>& a() const { return pair("A").a; }
  const DenseMatrix<T>& b() const { return pair("B").b; }
  const Tensor4<T>& tensor() const {
    if (const auto* g = std::get_if<General>(&form_)) return g->c;
    throw std::logic_error("instance is not in generalized form");
  }

  /// Average of f over S_n, computed once at construction.
  const T& mean() const { return mean_; }

  bool has_integer_kernel() const { return kernel_.has_value(); }

  /// f(σ) from 0-based images.
  T evaluate(std::span<const int> s) const {
    if (static_cast<int>(s.size()) != n_) throw std::invalid_argument("permutation size mismatch");
    if constexpr (is_exact_v<T>) {
      if (kernel_) return detail::make_rational(evaluate_scaled(s), kernel_->scale);
    }
    const auto n = static_cast<std::size_t>(n_);
    T total(0);
    if (const auto* p = std::get_if<Pair>(&form_)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) total += p->b(s[i], s[j]) * p->a(static_cast<int>(i), static_cast<int>(j));
    } else {
      const auto& c = std::get<General>(form_).c;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          total += c(static_cast<int>(i), static_cast<int>(j), s[i], s[j]);
    }
    return total;
  }

  T evaluate(const Permutation& sigma) const { return evaluate(sigma.images()); }

 private:
  explicit QapInstance(Pair p) : n_(p.a.n()), form_(std::move(p)) { finish(); }
  explicit QapInstance(General g) : n_(g.c.n()), form_(std::move(g)) { finish(); }

  const Pair& pair(const char* what) const {
    if (const auto* p = std::get_if<Pair>(&form_)) return *p;
    throw std::logic_error(std::string("generalized instance has no matrix ") + what);
  }

  void finish() {
    mean_ = compute_mean();
    if constexpr (is_exact_v<T>) build_kernel();
  }

  T compute_mean() const {
    const int n = n_;
    if (n < 2) return evaluate_identity_only();
    if (const auto* p = std::get_if<Pair>(&form_)) {
      T alpha1(0), alpha2(0), beta1(0), beta2(0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) {
            alpha2 += p->a(i, j);
            beta2 += p->b(i, j);
          } else {
            alpha1 += p->a(i, j);
            beta1 += p->b(i, j);
          }
        }
      T result = alpha1 * beta1 / T(n * (n - 1)) + alpha2 * beta2 / T(n);
      return result;
    }
    const auto& c = std::get<General>(form_).c;
    T off(0), diag(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (i != j && k != l) off += c(i, j, k, l);
            if (i == j && k == l) diag += c(i, j, k, l);
          }
    T result = off / T(n * (n - 1)) + diag / T(n);
    return result;
  }

  T evaluate_identity_only() const {
    std::vector<int> e(static_cast<std::size_t>(n_), 0);
    return evaluate(std::span<const int>(e));
  }

  void build_kernel() {
    const auto n2 = BigInt(n_) * n_;
    const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max()) / 2;
    if (const auto* p = std::get_if<Pair>(&form_)) {
      BigInt da, db, ma, mb;
      auto ia = detail::scale_to_integers(p->a.data(), da, ma);
      auto ib = detail::scale_to_integers(p->b.data(), db, mb);
      if (!ia || !ib || n2 * ma * mb > limit) return;
      kernel_ = detail::IntegerKernel{std::move(*ia), std::move(*ib), da * db};
    } else {
      const auto& c = std::get<General>(form_).c;
      BigInt dc, mc;
      auto ic = detail::scale_to_integers(c.data(), dc, mc);
      if (!ic || n2 * mc > limit) return;
      kernel_ = detail::IntegerKernel{std::move(*ic), {}, dc};
    }
  }

  std::int64_t evaluate_scaled(std::span<const int> s) const {
    const auto n = static_cast<std::size_t>(n_);
    std::int64_t total = 0;
    const auto& k = *kernel_;
    if (!k.second.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t* arow = k.first.data() + i * n;
        const std::int64_t* brow = k.second.data() + static_cast<std::size_t>(s[i]) * n;
        for (std::size_t j = 0; j < n; ++j) total += brow[s[j]] * arow[j];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          total += k.first[((i * n + j) * n + static_cast<std::size_t>(s[i])) * n +
                           static_cast<std::size_t>(s[j])];
    }
    return total;
  }

  int n_;
  std::variant<Pair, General> form_;
  T mean_{};
  std::optional<detail::IntegerKernel> kernel_;
};

template <Scalar T>
T evaluate(const QapInstance<T>& inst, const Permutation& sigma) {
  if (sigma.size() != inst.n()) throw std::invalid_argument("permutation size mismatch");
  return inst.evaluate(sigma);
}

template <Scalar T>
T mean_value(const QapInstance<T>& inst) {
  return inst.mean();
}

/// f₀(σ) = f(σ) − f̄.
template <Scalar T>
T shifted_value(const QapInstance<T>& inst, const Permutation& sigma) {
  T v = evaluate(inst, sigma) - inst.mean();
  return v;
}

/// The instance f₁ with f₁(σ) = f(στ).
template <Scalar T>
QapInstance<T> relabel_to_identity(const QapInstance<T>& inst, const Permutation& tau) {
  if (tau.size() != inst.n()) throw std::invalid_argument("permutation size mismatch");
  if (inst.is_matrix_pair())
    return QapInstance<T>::matrix_pair(apply_permutation(inst.a(), tau), inst.b());
  const int n = inst.n();
  const auto& c = inst.tensor();
  Tensor4<T> out(n);
  // c'^{τ(i)τ(j)}_{kl} = c^{ij}_{kl}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(tau[i], tau[j], k, l) = c(i, j, k, l);
  return QapInstance<T>::generalized(std::move(out));
}

// ---------------------------------------------------------------------------
// Regimes

enum class RegimeLabel { General = 0, Symmetric = 1, Pure = 2, Bullseye = 3 };

inline const char* to_string(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::Bullseye: return "bullseye";
    case RegimeLabel::Pure: return "pure";
    case RegimeLabel::Symmetric: return "symmetric";
    case RegimeLabel::General: return "general";
  }
  return "?";
}

struct Regime {
  RegimeLabel label = RegimeLabel::General;
  /// 'A' or 'B' (which side certified the label); '-' for General.
  char certified_by = '-';
};

/// Whether an instance in regime `have` satisfies the hypotheses of `need`.
inline bool satisfies(RegimeLabel have, RegimeLabel need) {
  switch (need) {
    case RegimeLabel::General: return true;
    case RegimeLabel::Bullseye: return have == RegimeLabel::Bullseye;
    case RegimeLabel::Pure: return have == RegimeLabel::Pure || have == RegimeLabel::Bullseye;
    case RegimeLabel::Symmetric:
      return have == RegimeLabel::Symmetric || have == RegimeLabel::Bullseye;
  }
  return false;
}

inline constexpr double kClassifyTolerance = 1e-12;

template <Scalar T>
RegimeLabel matrix_regime(const DenseMatrix<T>& m, double tol = kClassifyTolerance) {
  const double eps = is_exact_v<T> ? 0.0 : tol;
  const bool symmetric = is_symmetric(m, eps);
  const bool pure = has_constant_line_sums(m, eps) && has_constant_diagonal(m, eps);
  if (symmetric && pure) return RegimeLabel::Bullseye;
  if (pure) return RegimeLabel::Pure;
  if (symmetric) return RegimeLabel::Symmetric;
  return RegimeLabel::General;
}

/// Strongest regime certified by either side. For generalized instances a
/// label applies when every slice (fixed (k,l) on one side) has it.
template <Scalar T>
Regime classify(const QapInstance<T>& inst, double tol = kClassifyTolerance) {
  if (inst.n() < 4) throw std::invalid_argument("regime classification needs n >= 4");
  RegimeLabel first = RegimeLabel::General;
  RegimeLabel second = RegimeLabel::General;
  if (inst.is_matrix_pair()) {
    first = matrix_regime(inst.a(), tol);
    second = matrix_regime(inst.b(), tol);
  } else {
    const auto& c = inst.tensor();
    const int n = inst.n();
    auto weakest = [](RegimeLabel x, RegimeLabel y) {
      // meet of the label lattice: Pure and Symmetric only share General
      if (x == y) return x;
      if (x == RegimeLabel::Bullseye) return y;
      if (y == RegimeLabel::Bullseye) return x;
      return RegimeLabel::General;
    };
    first = second = RegimeLabel::Bullseye;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        first = weakest(first, matrix_regime(c.upper_slice(k, l), tol));
        DenseMatrix<T> lower(n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) lower(i, j) = c(k, l, i, j);
        second = weakest(second, matrix_regime(lower, tol));
      }
  }
  if (first == RegimeLabel::General && second == RegimeLabel::General) return {};
  if (static_cast<int>(second) > static_cast<int>(first)) return {second, 'B'};
  return {first, 'A'};
}

// ---------------------------------------------------------------------------
// Named instances

/// a_ij = 1 iff |i−j| ≡ 1 (mod n): the symmetric traveling-salesman cycle.
template <Scalar T>
DenseMatrix<T> symmetric_cycle_matrix(int n) {
  if (n < 4) throw std::invalid_argument("cycle matrices need n >= 4");
  DenseMatrix<T> m(n);
  for (int i = 0; i < n; ++i) {
    m(i, (i + 1) % n) = T(1);
    m((i + 1) % n, i) = T(1);
  }
  return m;
}

/// a_ij = 1 iff j ≡ i+1 (mod n): the asymmetric traveling-salesman cycle.
template <Scalar T>
DenseMatrix<T> directed_cycle_matrix(int n) {
  if (n < 4) throw std::invalid_argument("cycle matrices need n >= 4");
  DenseMatrix<T> m(n);
  for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = T(1);
  return m;
}

/// γ = (−n²+5n−8) / (8(n−2)).
inline Rational spike_gamma(int n) {
  return ScalarTraits<Rational>::from_ratio(-static_cast<long>(n) * n + 5L * n - 8, 8L * (n - 2));
}

/// A has ones at (1,2),(2,1); B is 0 on the diagonal, γ between the blocks
/// {1,2} and {3..n}, 1/2 elsewhere. f̄ = 0 and max f = 1 at e.
template <Scalar T>
QapInstance<T> spike_instance(int n) {
  if (n < 4) throw std::invalid_argument("spike instance needs n >= 4");
  DenseMatrix<T> a(n);
  a(0, 1) = a(1, 0) = T(1);
  const T gamma = ScalarTraits<T>::from_rational(spike_gamma(n));
  const T half = scalar<T>(1, 2);
  DenseMatrix<T> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool cross = (i <= 1) != (j <= 1);
      b(i, j) = cross ? gamma : half;
    }
  return QapInstance<T>::matrix_pair(std::move(a), std::move(b));
}

enum class RandomKind { General, Symmetric, Pure, Bullseye };

inline const char* to_string(RandomKind k) {
  switch (k) {
    case RandomKind::General: return "general";
    case RandomKind::Symmetric: return "symmetric";
    case RandomKind::Pure: return "pure";
    case RandomKind::Bullseye: return "bullseye";
  }
  return "?";
}

/// Entries are num/den with num uniform in [−range, range] and den uniform in
/// [1, max_denominator]; max_denominator = 1 gives integer instances.
struct RandomDistribution {
  RandomKind kind = RandomKind::General;
  long range = 9;
  long max_denominator = 1;
};

namespace detail {

template <Scalar T>
T random_entry(Rng& rng, const RandomDistribution& d) {
  const long num = uniform_int(rng, -d.range, d.range);
  const long den = d.max_denominator > 1 ? uniform_int(rng, 1, d.max_denominator) : 1;
  return scalar<T>(num, den);
}

template <Scalar T>
DenseMatrix<T> random_matrix(int n, Rng& rng, const RandomDistribution& d) {
  DenseMatrix<T> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = random_entry<T>(rng, d);
  return m;
}

inline Permutation random_derangement(int n, Rng& rng) {
  for (;;) {
    Permutation p = random_permutation(n, rng);
    if (cycle_stats(p).p == 0) return p;
  }
}

/// Σ w_r P_{δ_r} (+ transposes when symmetric) + c·I + d·J over random
/// derangements δ_r: constant line sums and constant diagonal.
template <Scalar T>
DenseMatrix<T> random_regular_matrix(int n, Rng& rng, const RandomDistribution& d, bool symmetric) {
  DenseMatrix<T> m(n);
  const int terms = 3;
  for (int r = 0; r < terms; ++r) {
    const T w = random_entry<T>(rng, d);
    const Permutation delta = random_derangement(n, rng);
    for (int i = 0; i < n; ++i) {
      m(i, delta[i]) += w;
      if (symmetric) m(delta[i], i) += w;
    }
  }
  const T diag = random_entry<T>(rng, d);
  const T fill = random_entry<T>(rng, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) += (i == j ? diag : T(0)) + fill;
  return m;
}

}  // namespace detail

/// Random matrix-pair instance whose A matrix has the requested structure and
/// whose B matrix is unstructured.
template <Scalar T>
QapInstance<T> random_instance(int n, const RandomDistribution& d, Rng& rng) {
  if (n < 2) throw std::invalid_argument("random_instance: n must be >= 2");
  DenseMatrix<T> a;
  switch (d.kind) {
    case RandomKind::General: a = detail::random_matrix<T>(n, rng, d); break;
    case RandomKind::Symmetric: {
      a = detail::random_matrix<T>(n, rng, d);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) a(i, j) = a(j, i);
      break;
    }
    case RandomKind::Pure: a = detail::random_regular_matrix<T>(n, rng, d, false); break;
    case RandomKind::Bullseye: a = detail::random_regular_matrix<T>(n, rng, d, true); break;
  }
  DenseMatrix<T> b = detail::random_matrix<T>(n, rng, d);
  return QapInstance<T>::matrix_pair(std::move(a), std::move(b));
}

template <Scalar T>
QapInstance<T> random_generalized_instance(int n, const RandomDistribution& d, Rng& rng) {
  Tensor4<T> c(n);
  for (auto& v : c.data()) v = detail::random_entry<T>(rng, d);
  return QapInstance<T>::generalized(std::move(c));
}

/// Re-expresses a matrix-pair instance as the tensor A ⊗ B.
template <Scalar T>
QapInstance<T> to_generalized(const QapInstance<T>& inst) {
  if (!inst.is_matrix_pair()) return inst;
  return QapInstance<T>::generalized(Tensor4<T>::outer(inst.a(), inst.b()));
}

/// Converts an exact instance to float mode.
inline QapInstance<double> to_float(const QapInstance<Rational>& inst) {
  auto conv = [](const DenseMatrix<Rational>& m) {
    DenseMatrix<double> out(m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) out(i, j) = m(i, j).get_d();
    return out;
  };
  if (inst.is_matrix_pair()) return QapInstance<double>::matrix_pair(conv(inst.a()), conv(inst.b()));
  Tensor4<double> c(inst.n());
  for (std::size_t k = 0; k < c.data().size(); ++k) c.data()[k] = inst.tensor().data()[k].get_d();
  return QapInstance<double>::generalized(std::move(c));
}

}  // namespace qapdist
