#pragma once

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qapdist/permutation.hpp"
#include "qapdist/scalar.hpp"

namespace qapdist {

/// Square n×n matrix, row-major, 0-based indices.
template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int n, const T& fill = T(0))
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {
    if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  }

  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows)
      : DenseMatrix(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("matrix must be square");
      int j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int n() const { return n_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  const std::vector<T>& data() const { return data_; }

  DenseMatrix transpose() const {
    DenseMatrix out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, const T& s) { return a *= s; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

  T row_sum(int i) const {
    T s(0);
    for (int j = 0; j < n_; ++j) s += (*this)(i, j);
    return s;
  }
  T col_sum(int j) const {
    T s(0);
    for (int i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  void require_same(const DenseMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix dimension mismatch");
  }

  int n_ = 0;
  std::vector<T> data_;
};

/// ⟨A, B⟩ = Σ a_ij b_ij.
template <Scalar T>
T inner(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("matrix dimension mismatch");
  T s(0);
  for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

/// σ(A) = B with b_{σ(i)σ(j)} = a_{ij}.
template <Scalar T>
DenseMatrix<T> apply_permutation(const DenseMatrix<T>& a, const Permutation& sigma) {
  if (a.n() != sigma.size()) throw std::invalid_argument("matrix/permutation size mismatch");
  DenseMatrix<T> out(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) out(sigma[i], sigma[j]) = a(i, j);
  return out;
}

template <Scalar T>
bool is_zero_matrix(const DenseMatrix<T>& a, double tol = 0.0) {
  for (const auto& v : a.data())
    if (sign_of<T>(v, tol) != 0) return false;
  return true;
}

template <Scalar T>
bool is_symmetric(const DenseMatrix<T>& a, double tol = 0.0) {
  for (int i = 0; i < a.n(); ++i)
    for (int j = i + 1; j < a.n(); ++j)
      if (!near<T>(a(i, j), a(j, i), tol)) return false;
  return true;
}

template <Scalar T>
bool is_skew_symmetric(const DenseMatrix<T>& a, double tol = 0.0) {
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j)
      if (sign_of<T>(T(a(i, j) + a(j, i)), tol) != 0) return false;
  return true;
}

/// All row and column sums equal the same value.
template <Scalar T>
bool has_constant_line_sums(const DenseMatrix<T>& a, double tol = 0.0) {
  const T ref = a.row_sum(0);
  for (int i = 0; i < a.n(); ++i)
    if (!near<T>(a.row_sum(i), ref, tol) || !near<T>(a.col_sum(i), ref, tol)) return false;
  return true;
}

template <Scalar T>
bool has_zero_line_sums(const DenseMatrix<T>& a, double tol = 0.0) {
  for (int i = 0; i < a.n(); ++i)
    if (sign_of<T>(a.row_sum(i), tol) != 0 || sign_of<T>(a.col_sum(i), tol) != 0) return false;
  return true;
}

template <Scalar T>
bool has_constant_diagonal(const DenseMatrix<T>& a, double tol = 0.0) {
  for (int i = 1; i < a.n(); ++i)
    if (!near<T>(a(i, i), a(0, 0), tol)) return false;
  return true;
}

template <Scalar T>
bool has_zero_diagonal(const DenseMatrix<T>& a, double tol = 0.0) {
  for (int i = 0; i < a.n(); ++i)
    if (sign_of<T>(a(i, i), tol) != 0) return false;
  return true;
}

/// Dense 4-index array c^{ij}_{kl}, 0-based, stored row-major in (i,j,k,l).
template <Scalar T>
class Tensor4 {
 public:
  static constexpr int max_dimension = 64;

  Tensor4() = default;
  explicit Tensor4(int n, const T& fill = T(0)) : n_(n) {
    if (n < 1 || n > max_dimension)
      throw std::out_of_range("tensor dimension must be in 1.." + std::to_string(max_dimension));
    data_.assign(static_cast<std::size_t>(n) * n * n * n, fill);
  }

  /// C = A ⊗ B, c^{ij}_{kl} = a_ij b_kl.
  static Tensor4 outer(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.n() != b.n()) throw std::invalid_argument("matrix dimension mismatch");
    Tensor4 c(a.n());
    for (int i = 0; i < a.n(); ++i)
      for (int j = 0; j < a.n(); ++j)
        for (int k = 0; k < a.n(); ++k)
          for (int l = 0; l < a.n(); ++l) c(i, j, k, l) = a(i, j) * b(k, l);
    return c;
  }

  int n() const { return n_; }
  T& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  const T& operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  /// The matrix a_ij = c^{ij}_{kl} for fixed (k, l).
  DenseMatrix<T> upper_slice(int k, int l) const {
    DenseMatrix<T> m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j, k, l);
    return m;
  }

  friend bool operator==(const Tensor4& a, const Tensor4& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n +
            static_cast<std::size_t>(k)) * n + static_cast<std::size_t>(l);
  }

  int n_ = 0;
  std::vector<T> data_;
};

// Small dense linear algebra on row lists; exact in rational mode.

/// Rank by Gaussian elimination.
template <Scalar T>
int rank(std::vector<std::vector<T>> rows, double tol = 1e-12) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  int r = 0;
  for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(r);
    if constexpr (is_exact_v<T>) {
      while (pivot < rows.size() && sgn(rows[pivot][c]) == 0) ++pivot;
    } else {
      std::size_t best = pivot;
      for (std::size_t i = pivot; i < rows.size(); ++i)
        if (std::abs(rows[i][c]) > std::abs(rows[best][c])) best = i;
      pivot = std::abs(rows[best][c]) > tol ? best : rows.size();
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(r)]);
    const auto& prow = rows[static_cast<std::size_t>(r)];
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows.size(); ++i) {
      if (sign_of<T>(rows[i][c]) == 0) continue;
      T factor = rows[i][c] / prow[c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= factor * prow[k];
    }
    ++r;
  }
  return r;
}

/// Solves the square system M x = b; nullopt when M is singular.
template <Scalar T>
std::optional<std::vector<T>> solve(std::vector<std::vector<T>> m, std::vector<T> b,
                                    double tol = 1e-12) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t i = c; i < n; ++i) {
      if constexpr (is_exact_v<T>) {
        if (sgn(m[i][c]) != 0) {
          pivot = i;
          break;
        }
      } else {
        if (std::abs(m[i][c]) > std::abs(m[pivot][c])) pivot = i;
      }
    }
    if (sign_of<T>(m[pivot][c], is_exact_v<T> ? 0.0 : tol) == 0) return std::nullopt;
    std::swap(m[pivot], m[c]);
    std::swap(b[pivot], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sign_of<T>(m[i][c]) == 0) continue;
      T factor = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= factor * m[c][k];
      b[i] -= factor * b[c];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

}  // namespace qapdist
