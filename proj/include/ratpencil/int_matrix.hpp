#pragma once

// Small dense integer matrices with exact elimination routines: Bareiss
// determinant, rank, saturated integer kernel, and an exact positive
// semidefiniteness test.

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ratpencil/checked.hpp"

namespace ratpencil {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Int> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  std::vector<Int> col(std::size_t c) const {
    std::vector<Int> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r + 1; c < cols_; ++c)
        if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          out(i, j) = checked::add(out(i, j), checked::mul(aik, b(k, j)));
      }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        checked::narrow(a[i][j]);
      }
    }
    prev = a[k][k];
  }
  return checked::narrow(sign * a[n - 1][n - 1]);
}

/// Rank over the rationals.
inline std::size_t matrix_rank(const IntMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && a[p][c] == Rational(0)) ++p;
    if (p == m.rows()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (a[i][c] == Rational(0)) continue;
      const Rational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Basis (as columns) of the integer kernel {x in Z^n : m x = 0}. The basis
/// spans a saturated sublattice because it is read off a unimodular
/// transform.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  const std::size_t n = m.cols();
  IntMatrix work = m;
  IntMatrix u = IntMatrix::identity(n);
  auto col_op = [&](std::size_t dst, std::size_t src, Int factor) {
    // column dst -= factor * column src
    for (std::size_t r = 0; r < work.rows(); ++r)
      work(r, dst) = checked::sub(work(r, dst), checked::mul(factor, work(r, src)));
    for (std::size_t r = 0; r < n; ++r)
      u(r, dst) = checked::sub(u(r, dst), checked::mul(factor, u(r, src)));
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < work.rows(); ++r) std::swap(work(r, a), work(r, b));
    for (std::size_t r = 0; r < n; ++r) std::swap(u(r, a), u(r, b));
  };

  std::size_t pivot_col = 0;
  for (std::size_t r = 0; r < work.rows() && pivot_col < n; ++r) {
    // Euclid on row r across columns pivot_col..n-1.
    while (true) {
      std::size_t best = n;
      for (std::size_t c = pivot_col; c < n; ++c) {
        if (work(r, c) == 0) continue;
        if (best == n || std::abs(work(r, c)) < std::abs(work(r, best))) best = c;
      }
      if (best == n) break;
      col_swap(pivot_col, best);
      bool reduced = true;
      for (std::size_t c = pivot_col + 1; c < n; ++c) {
        if (work(r, c) == 0) continue;
        col_op(c, pivot_col, work(r, c) / work(r, pivot_col));
        if (work(r, c) != 0) reduced = false;
      }
      if (reduced) {
        ++pivot_col;
        break;
      }
    }
  }
  IntMatrix kernel(n, n - pivot_col);
  for (std::size_t c = pivot_col; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) kernel(r, c - pivot_col) = u(r, c);
  return kernel;
}

/// Exact test that a symmetric matrix is positive semidefinite, by symmetric
/// Gaussian elimination over the rationals. A zero pivot must have a zero
/// row; a negative pivot fails.
inline bool is_positive_semidefinite(const IntMatrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("semidefiniteness of non-symmetric matrix");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    const Rational pivot = a[k][k];
    if (pivot < Rational(0)) return false;
    if (pivot == Rational(0)) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (a[k][j] != Rational(0)) return false;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == Rational(0)) continue;
      const Rational f = a[i][k] / pivot;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return true;
}

}  // namespace ratpencil
