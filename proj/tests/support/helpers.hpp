#pragma once

#include <ostream>

#include "qapdist/qapdist.hpp"
#include "support/oracles.hpp"

namespace qapdist {

// gtest printers, found by argument-dependent lookup.
inline void PrintTo(const CharacterCoefficients<Rational>& c, std::ostream* os) {
  *os << "{" << c.c[0] << ", " << c.c[1] << ", " << c.c[2] << ", " << c.c[3] << "}";
}

}  // namespace qapdist

namespace testing_support {

/// Canonical a/b; mpq_class(a, b) alone leaves common factors in place.
inline qapdist::Rational frac(long a, long b) {
  qapdist::Rational q(a, b);
  q.canonicalize();
  return q;
}

inline oracle::Mat to_mat(const qapdist::DenseMatrix<qapdist::Rational>& m) {
  oracle::Mat out(static_cast<std::size_t>(m.n()), std::vector<oracle::Q>(static_cast<std::size_t>(m.n())));
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline oracle::Perm to_perm(const qapdist::Permutation& p) {
  return {p.images().begin(), p.images().end()};
}

inline qapdist::Permutation from_perm(const oracle::Perm& p) {
  return qapdist::Permutation::from_zero_based(p);
}

/// Oracle value of an instance at σ, straight from its matrices or tensor.
inline oracle::Q oracle_value(const qapdist::QapInstance<qapdist::Rational>& inst, const oracle::Perm& s) {
  if (inst.is_matrix_pair()) return oracle::pair_value(to_mat(inst.a()), to_mat(inst.b()), s);
  return oracle::tensor_value(inst.tensor().data(), inst.n(), s);
}

inline qapdist::QapInstance<qapdist::Rational> random_rational_pair(int n, qapdist::Rng& rng,
                                                                    qapdist::RandomKind kind = qapdist::RandomKind::General) {
  qapdist::RandomDistribution d;
  d.kind = kind;
  d.range = 7;
  d.max_denominator = 4;
  return qapdist::random_instance<qapdist::Rational>(n, d, rng);
}

}  // namespace testing_support
