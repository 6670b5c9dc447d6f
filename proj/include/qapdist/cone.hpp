#pragma once

// Central cones of class functions maximized at the identity: K_p (pure),
// K_s (symmetric) and K (general). Extreme rays, membership through the
// reduced inequality systems, decomposition on rays, the (p, 2t/(n−p))
// polytope and the probability thresholds built on top of the cones.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qapdist/counting.hpp"
#include "qapdist/isotypic.hpp"
#include "qapdist/matrix.hpp"
#include "qapdist/scalar.hpp"

namespace qapdist {

enum class ConeType { Pure, Symmetric, General };

inline const char* to_string(ConeType c) {
  switch (c) {
    case ConeType::Pure: return "pure";
    case ConeType::Symmetric: return "symmetric";
    case ConeType::General: return "general";
  }
  return "?";
}

inline ConeType cone_type_from_string(const std::string& s) {
  if (s == "pure") return ConeType::Pure;
  if (s == "symmetric") return ConeType::Symmetric;
  if (s == "general") return ConeType::General;
  throw std::invalid_argument("unknown cone kind: " + s);
}

struct ConeKind {
  ConeType type = ConeType::General;
  int n = 4;

  ConeKind() = default;
  ConeKind(ConeType type_, int n_) : type(type_), n(n_) {
    if (n < 4) throw std::invalid_argument("cones are defined for n >= 4");
  }
  bool odd() const { return n % 2 == 1; }
  /// Number of basis coordinates (g₁, g₂[, g₃]).
  int dimension() const { return type == ConeType::General ? 3 : 2; }
};

/// The cone regime that contains the central projection of an instance.
inline ConeType cone_type_for(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::Bullseye:
    case RegimeLabel::Pure: return ConeType::Pure;
    case RegimeLabel::Symmetric: return ConeType::Symmetric;
    case RegimeLabel::General: return ConeType::General;
  }
  return ConeType::General;
}

// ---------------------------------------------------------------------------
// Basis changes
//
// Pure:      g₁ = χ₂₂ + χ₂₁₁,  g₂ = χ₂₁₁ − χ₂₂               (c₁₁ = 0)
// Symmetric: g₁ = χ₁₁,         g₂ = 2χ₂₂ + 3χ₁₁               (c₂₁₁ = 0)
// General:   g₁ = χ₁₁,  g₂ = χ₂₂ + χ₂₁₁ + 3χ₁₁,  g₃ = χ₂₁₁ − χ₂₂
// The trivial coefficient is dropped: the cones live in the mean-zero part.

template <Scalar T>
std::vector<T> basis_coordinates(const CharacterCoefficients<T>& c, ConeType type) {
  const T c11 = c[Irrep::Standard], c22 = c[Irrep::TwoRow], c211 = c[Irrep::Hook];
  const T two(2);
  switch (type) {
    case ConeType::Pure: return {T((c22 + c211) / two), T((c211 - c22) / two)};
    case ConeType::Symmetric: {
      const T a2 = c22 / two;
      return {T(c11 - T(3) * a2), a2};
    }
    case ConeType::General: {
      const T a2 = (c22 + c211) / two;
      return {T(c11 - T(3) * a2), a2, T((c211 - c22) / two)};
    }
  }
  throw std::logic_error("bad cone type");
}

template <Scalar T>
CharacterCoefficients<T> from_basis_coordinates(const std::vector<T>& a, ConeType type) {
  CharacterCoefficients<T> c;
  switch (type) {
    case ConeType::Pure:
      c[Irrep::TwoRow] = a.at(0) - a.at(1);
      c[Irrep::Hook] = a.at(0) + a.at(1);
      break;
    case ConeType::Symmetric:
      c[Irrep::Standard] = a.at(0) + T(3) * a.at(1);
      c[Irrep::TwoRow] = T(2) * a.at(1);
      break;
    case ConeType::General:
      c[Irrep::Standard] = a.at(0) + T(3) * a.at(1);
      c[Irrep::TwoRow] = a.at(1) - a.at(2);
      c[Irrep::Hook] = a.at(1) + a.at(2);
      break;
  }
  return c;
}

/// Tolerance for the span restriction and the float-mode verdicts.
inline constexpr double kConeTolerance = 1e-9;

/// Throws when coefficients have a component outside the cone's span.
template <Scalar T>
void require_in_span(const CharacterCoefficients<T>& c, ConeType type, double tol = kConeTolerance) {
  auto scale = [&] {
    double s = 0.0;
    for (Irrep r : kIrreps)
      if (r != Irrep::Trivial) s = std::max(s, std::abs(to_double(c[r])));
    return std::max(s, 1.0);
  };
  const double eps = is_exact_v<T> ? 0.0 : tol * scale();
  if (type == ConeType::Pure && sign_of<T>(c[Irrep::Standard], eps) != 0)
    throw std::invalid_argument("pure cone requires a zero (n-1,1) coefficient");
  if (type == ConeType::Symmetric && sign_of<T>(c[Irrep::Hook], eps) != 0)
    throw std::invalid_argument("symmetric cone requires a zero (n-2,1,1) coefficient");
}

// ---------------------------------------------------------------------------
// Rays

template <Scalar T>
struct NamedRay {
  std::string name;
  CharacterCoefficients<T> coeffs;
  std::vector<T> basis;  // coordinates in (g₁, g₂[, g₃])
  bool generating = true;

  T operator()(int p, int t) const { return coeffs.value(p, t); }
  ClassFunction<T> as_class_function(int n) const { return ClassFunction<T>::span(n, coeffs); }
};

template <Scalar T>
struct RaySet {
  ConeKind kind;
  std::vector<NamedRay<T>> rays;  // generating rays first, in consecutive order

  std::vector<const NamedRay<T>*> generating() const& {
    std::vector<const NamedRay<T>*> out;
    for (const auto& r : rays)
      if (r.generating) out.push_back(&r);
    return out;
  }
  void generating() && = delete;
  const NamedRay<T>& operator[](const std::string& name) const {
    for (const auto& r : rays)
      if (r.name == name) return r;
    throw std::out_of_range("no ray named " + name);
  }
};

namespace detail {

/// Ray given as (P2·p² + P1·p + Tc·t + C) / D with integer polynomial
/// coefficients.
template <Scalar T>
NamedRay<T> ray_from_polynomial(std::string name, ConeType type, long p2, long p1, long tc, long c0,
                                long den, bool generating) {
  NamedRay<T> r;
  r.name = std::move(name);
  r.coeffs = coefficients_from_polynomial<T>(scalar<T>(p2, den), scalar<T>(p1, den),
                                             scalar<T>(tc, den), scalar<T>(c0, den));
  r.basis = basis_coordinates(r.coeffs, type);
  r.generating = generating;
  return r;
}

}  // namespace detail

/// Extreme rays of the cone, each scaled to value 1 at the identity. For a
/// given parity the rays that do not generate the cone are still included,
/// flagged `generating = false`, after the generating ones.
template <Scalar T>
RaySet<T> extreme_rays(ConeKind kind) {
  const long n = kind.n;
  const bool odd = kind.odd();
  RaySet<T> set{kind, {}};
  auto add = [&](std::string name, long p2, long p1, long tc, long c0, long den, bool gen) {
    set.rays.push_back(
        detail::ray_from_polynomial<T>(std::move(name), kind.type, p2, p1, tc, c0, den, gen));
  };
  switch (kind.type) {
    case ConeType::Pure:
      add("r1", 0, 0, -2, 1, 1, true);
      // r2e = (p² − 3p − n − 6t + 2tn + 4)/(n−2)²
      add("r2e", 1, -3, 2 * n - 6, 4 - n, (n - 2) * (n - 2), !odd);
      // r2o = (p² − 3p − n − 4t + 2tn + 3)/(n² − 4n + 3)
      add("r2o", 1, -3, 2 * n - 4, 3 - n, n * n - 4 * n + 3, odd);
      break;
    case ConeType::Symmetric:
      // r1 = (2np − 2n − p² − 3p − 2t + 6)/(n² − 5n + 6)
      add("r1", -1, 2 * n - 3, -2, 6 - 2 * n, n * n - 5 * n + 6, true);
      // r2e = (−np + n + p² + p + 2t − 4)/(2n − 4)
      add("r2e", 1, 1 - n, 2, n - 4, 2 * n - 4, !odd);
      // r2o = (−n²p + np² + n² + np + 2nt − 4n − 3p + 3)/(2n² − 7n + 3)
      add("r2o", n, -n * n + n - 3, 2 * n, n * n - 4 * n + 3, 2 * n * n - 7 * n + 3, odd);
      break;
    case ConeType::General:
      // r1 = (−np + n + p² − 2)/(n − 2)
      add("r1", 1, -n, 0, n - 2, n - 2, true);
      add("r2", 0, 0, -2, 1, 1, true);
      // r3 = (2np − 3p − 2n − p² − 2t + 6)/(n² − 5n + 6)
      add("r3", -1, 2 * n - 3, -2, 6 - 2 * n, n * n - 5 * n + 6, true);
      // r4 = (p + 2t − 2)/(n − 2)
      add("r4", 0, 1, 2, -2, n - 2, true);
      // r5o = (−2np + 3p² − 3p + 2tn + n − 3)/(n² − 2n − 3)
      add("r5o", 3, -2 * n - 3, 2 * n, n - 3, n * n - 2 * n - 3, odd);
      break;
  }
  std::stable_partition(set.rays.begin(), set.rays.end(),
                        [](const NamedRay<T>& r) { return r.generating; });
  return set;
}

// ---------------------------------------------------------------------------
// Reduced inequality systems

struct Inequality {
  std::string id;
  std::vector<long> row;  // coefficients on the basis coordinates
};

inline std::vector<Inequality> reduced_system(ConeKind kind) {
  const long n = kind.n;
  switch (kind.type) {
    case ConeType::Pure:
      if (!kind.odd()) return {{"9.3.1-a", {1, 0}}, {"9.3.1-b", {n - 3, 1}}};
      return {{"9.3.2-a", {1, 0}}, {"9.3.2-b", {n - 2, 1}}};
    case ConeType::Symmetric:
      if (!kind.odd()) return {{"10.2.1-a", {1, 2 * n - 3}}, {"10.2.1-b", {1, n - 1}}};
      return {{"10.2.1-a", {1, 2 * n - 3}}, {"10.2.1-b", {n, n * n - n + 3}}};
    case ConeType::General:
      if (!kind.odd())
        return {{"11.2.1-a", {1, n, 0}},
                {"11.2.1-b", {1, 2 * n - 3, 0}},
                {"11.2.1-c", {1, 2 * n - 2, 1}},
                {"11.2.1-d", {1, n, 1}}};
      return {{"11.2.2-a", {1, n, 0}},
              {"11.2.2-b", {1, 2 * n - 3, 0}},
              {"11.2.2-c", {1, 2 * n - 2, 1}},
              {"11.2.2-d", {1, n + 1, 1}},
              {"11.2.2-e", {n, n * n, n - 3}}};
  }
  return {};
}

enum class Verdict { Member, NotMember, Boundary };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "member";
    case Verdict::NotMember: return "not_member";
    case Verdict::Boundary: return "boundary";
  }
  return "?";
}

template <Scalar T>
struct Slack {
  std::string id;
  T value;
};

template <Scalar T>
struct ConeReport {
  ConeKind kind;
  Verdict verdict = Verdict::NotMember;
  bool member = false;
  std::vector<T> basis;                                 // (α₁, α₂[, α₃])
  std::vector<Slack<T>> slacks;                         // every inequality
  std::vector<Slack<T>> violated;                       // negative slacks
  std::vector<std::pair<std::string, T>> ray_weights;  // when member
  T constant{};         // trivial coefficient, not part of the cone test
  T value_at_identity{};
  T span_residual{};
};

namespace detail {

template <Scalar T>
T dot(const std::vector<long>& row, const std::vector<T>& x) {
  T s(0);
  for (std::size_t i = 0; i < row.size(); ++i) s += T(row[i]) * x[i];
  return s;
}

template <Scalar T>
double row_scale(const std::vector<long>& row, const std::vector<T>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i)
    s += std::abs(static_cast<double>(row[i]) * to_double(x[i]));
  return s;
}

}  // namespace detail

template <Scalar T>
std::optional<std::vector<std::pair<std::string, T>>> try_decompose_on_rays(
    const CharacterCoefficients<T>& coeffs, ConeKind kind);

/// Membership of the mean-zero part of Σ c_λ χ_λ in the cone. Exact for
/// rationals; in float mode a slack within 1e-9 (relative to the terms of its
/// inequality) gives a Boundary verdict, which counts as membership.
template <Scalar T>
ConeReport<T> membership(const CharacterCoefficients<T>& coeffs, ConeKind kind) {
  require_in_span(coeffs, kind.type);
  ConeReport<T> rep;
  rep.kind = kind;
  rep.basis = basis_coordinates(coeffs, kind.type);
  rep.constant = coeffs[Irrep::Trivial];
  CharacterCoefficients<T> centered = coeffs;
  centered[Irrep::Trivial] = T(0);
  rep.value_at_identity = centered.at_identity(kind.n);
  rep.span_residual = T(0);

  bool near_zero = false;
  for (const auto& ineq : reduced_system(kind)) {
    const T slack = detail::dot(ineq.row, rep.basis);
    rep.slacks.push_back({ineq.id, slack});
    const double eps = is_exact_v<T> ? 0.0 : kConeTolerance * detail::row_scale(ineq.row, rep.basis);
    const int s = sign_of<T>(slack, eps);
    if (s < 0) rep.violated.push_back({ineq.id, slack});
    if (s == 0 && !is_exact_v<T>) near_zero = true;
  }
  if (!rep.violated.empty()) {
    rep.verdict = Verdict::NotMember;
  } else {
    rep.verdict = near_zero ? Verdict::Boundary : Verdict::Member;
    rep.member = true;
    if (auto w = try_decompose_on_rays(centered, kind)) rep.ray_weights = std::move(*w);
  }
  return rep;
}

/// Membership of a class function; tables are first projected onto the
/// character span and the distance to the span is reported.
template <Scalar T>
ConeReport<T> membership(const ClassFunction<T>& cf, ConeType type) {
  const SpanProjection<T> proj = character_coefficients(cf);
  ConeReport<T> rep = membership(proj.coeffs, ConeKind(type, cf.n()));
  rep.span_residual = proj.residual_sq;
  return rep;
}

/// Definition-level check: g(e) ≥ g(σ) on every class of σ ≠ e.
template <Scalar T>
bool membership_bruteforce(const CharacterCoefficients<T>& coeffs, int n, double tol = 0.0) {
  const T at_e = coeffs.at_identity(n);
  for (const auto& s : feasible_pt_pairs(n)) {
    const T v = coeffs.value(s.p, s.t);
    if (sign_of<T>(T(at_e - v), tol) < 0) return false;
  }
  return true;
}

template <Scalar T>
bool membership_bruteforce(const ClassFunction<T>& cf, double tol = 0.0) {
  if (cf.is_span()) return membership_bruteforce(cf.coefficients(), cf.n(), tol);
  const T at_e = cf.at_identity();
  for (const auto& [ct, v] : cf.values())
    if (sign_of<T>(T(at_e - v), tol) < 0) return false;
  return true;
}

/// Nonnegative weights on the generating rays reproducing the non-constant
/// part of `coeffs`, or nullopt if there are none. The 2-dimensional cones
/// have a unique answer. For the general cone the base polygon is fanned
/// from r1 in the order r1, r2, r3, r4[, r5o] and the first triangle whose
/// barycentric weights are all nonnegative is used.
template <Scalar T>
std::optional<std::vector<std::pair<std::string, T>>> try_decompose_on_rays(
    const CharacterCoefficients<T>& coeffs, ConeKind kind) {
  const RaySet<T> set = extreme_rays<T>(kind);
  const auto gens = set.generating();
  const std::vector<T> target = basis_coordinates(coeffs, kind.type);
  const int dim = kind.dimension();
  double scale = 0.0;
  for (const auto& v : target) scale = std::max(scale, std::abs(to_double(v)));
  const double eps = is_exact_v<T> ? 0.0 : kConeTolerance * std::max(scale, 1.0);

  auto attempt = [&](const std::vector<std::size_t>& pick)
      -> std::optional<std::vector<std::pair<std::string, T>>> {
    std::vector<std::vector<T>> m(static_cast<std::size_t>(dim),
                                  std::vector<T>(pick.size(), T(0)));
    for (std::size_t c = 0; c < pick.size(); ++c)
      for (int r = 0; r < dim; ++r)
        m[static_cast<std::size_t>(r)][c] = gens[pick[c]]->basis[static_cast<std::size_t>(r)];
    auto w = solve(m, target);
    if (!w) return std::nullopt;
    for (auto& x : *w) {
      if (sign_of<T>(x, eps) < 0) return std::nullopt;
      if (!is_exact_v<T> && sign_of<T>(x, eps) == 0) x = T(0);
    }
    std::vector<std::pair<std::string, T>> out;
    for (const auto* g : gens) out.emplace_back(g->name, T(0));
    for (std::size_t c = 0; c < pick.size(); ++c) out[pick[c]].second = (*w)[c];
    return out;
  };

  if (dim == 2) return attempt({0, 1});
  for (std::size_t i = 1; i + 1 < gens.size(); ++i)
    if (auto w = attempt({0, i, i + 1})) return w;
  return std::nullopt;
}

template <Scalar T>
std::vector<std::pair<std::string, T>> decompose_on_rays(const CharacterCoefficients<T>& coeffs,
                                                         ConeKind kind) {
  require_in_span(coeffs, kind.type);
  CharacterCoefficients<T> centered = coeffs;
  centered[Irrep::Trivial] = T(0);
  if (!membership(centered, kind).member)
    throw std::invalid_argument("function is not in the " + std::string(to_string(kind.type)) +
                                " cone");
  auto w = try_decompose_on_rays(centered, kind);
  if (!w) throw std::logic_error("member without a ray decomposition");
  return *w;
}

/// Σ w_r · r over named rays.
template <Scalar T>
CharacterCoefficients<T> combine_rays(const RaySet<T>& set,
                                      const std::vector<std::pair<std::string, T>>& weights) {
  CharacterCoefficients<T> out;
  for (const auto& [name, w] : weights) out += set[name].coeffs * w;
  return out;
}

// ---------------------------------------------------------------------------
// The polytope of (p, q) with q = 2t/(n−p) over σ ≠ e

struct PtPoint {
  Rational p;
  Rational q;
  friend bool operator==(const PtPoint&, const PtPoint&) = default;
};

inline std::vector<PtPoint> pt_polytope_vertices(int n) {
  if (n < 4) throw std::invalid_argument("pt_polytope_vertices: n must be >= 4");
  const Rational zero(0), one(1);
  if (n % 2 == 0) return {{zero, zero}, {Rational(n - 3), zero}, {Rational(n - 2), one}, {zero, one}};
  return {{zero, zero},
          {Rational(n - 3), zero},
          {Rational(n - 2), one},
          {zero, ratio(BigInt(n - 3), BigInt(n))},
          {one, one}};
}

// ---------------------------------------------------------------------------
// Thresholds and probability bounds

/// α(n,k) = ((n−k)² − 3(n−k)) / (n² − 3n).
inline Rational alpha_threshold(int n, int k) {
  if (n < 4) throw std::invalid_argument("alpha_threshold: n must be >= 4");
  if (k < 0 || k > n) throw std::out_of_range("alpha_threshold: need 0 <= k <= n");
  const long m = n - k;
  return ratio(BigInt(m * m - 3 * m), BigInt(static_cast<long>(n) * n - 3L * n));
}

/// The three tail theorems: bullseye, pure and general regimes.
enum class TailTheorem { Bullseye, Pure, General };

inline const char* theorem_id(TailTheorem t) {
  switch (t) {
    case TailTheorem::Bullseye: return "2.3";
    case TailTheorem::Pure: return "3.1";
    case TailTheorem::General: return "5.1";
  }
  return "?";
}

inline TailTheorem theorem_from_id(const std::string& id) {
  if (id == "2.3") return TailTheorem::Bullseye;
  if (id == "3.1") return TailTheorem::Pure;
  if (id == "5.1") return TailTheorem::General;
  throw std::invalid_argument("unknown theorem id: " + id);
}

/// Regime an instance must have for the theorem to apply.
inline RegimeLabel theorem_regime(TailTheorem t) {
  switch (t) {
    case TailTheorem::Bullseye: return RegimeLabel::Bullseye;
    case TailTheorem::Pure: return RegimeLabel::Pure;
    case TailTheorem::General: return RegimeLabel::General;
  }
  return RegimeLabel::General;
}

inline long theorem_divisor(TailTheorem t) {
  switch (t) {
    case TailTheorem::Bullseye: return 3;
    case TailTheorem::Pure: return 10;
    case TailTheorem::General: return 5;
  }
  return 1;
}

inline void require_theorem_range(int n, int k) {
  if (n < 8 || k < 3 || k > n - 5)
    throw std::out_of_range("tail theorems need 3 <= k <= n-5, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
}

/// (k² − 3k + 1)/(n² − 3n + 1): lower bound on max{g(k,0), g(k,1)} over
/// g ∈ K_p with g(e) = 1.
inline Rational pure_ring_bound(int n, int k) {
  const long nn = n, kk = k;
  return ratio(BigInt(kk * kk - 3 * kk + 1), BigInt(nn * nn - 3 * nn + 1));
}

/// (k − 2)/(n² − kn + k − 2): lower bound on max{g(k,0), g(0,1), g(0,0)}
/// over the general cone with g(e) = 1.
inline Rational general_ring_bound(int n, int k) {
  const long nn = n, kk = k;
  return ratio(BigInt(kk - 2), BigInt(nn * nn - kk * nn + kk - 2));
}

/// β(n,k) of the theorem: the fraction of f₀(τ) reached on a large set.
inline Rational theorem_beta(TailTheorem t, int n, int k) {
  require_theorem_range(n, k);
  switch (t) {
    case TailTheorem::Bullseye: {
      const long nn = n, kk = k;
      return ratio(BigInt(kk * kk - 3 * kk), BigInt(nn * nn - 3 * nn));
    }
    case TailTheorem::Pure: return pure_ring_bound(n, k);
    case TailTheorem::General: return general_ring_bound(n, k);
  }
  throw std::logic_error("bad theorem");
}

/// (1 − γ)·β(n,k) / (d·k!) with d = 3, 10 or 5.
inline Rational theorem_probability_bound(TailTheorem t, int n, int k, const Rational& gamma) {
  if (gamma <= 0 || gamma >= 1) throw std::out_of_range("gamma must lie in (0, 1)");
  const Rational beta = theorem_beta(t, n, k);
  return (1 - gamma) * beta /
         Rational(BigInt(theorem_divisor(t)) * factorial(static_cast<unsigned long>(k)));
}

}  // namespace qapdist
