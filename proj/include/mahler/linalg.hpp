#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"

namespace mahler {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(size_t n, const T& one, const T& zero) {
    Matrix m(n, n, zero);
    for (size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw MahlerError(ErrorKind::Input, "matrix dimension mismatch");
    Matrix out(rows_, o.cols_, T());
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < o.cols_; ++j) {
        T acc = (*this)(i, 0) * o(0, j);
        for (size_t k = 1; k < cols_; ++k) acc = acc + (*this)(i, k) * o(k, j);
        out(i, j) = acc;
      }
    return out;
  }

  template <class F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    Matrix<decltype(f(std::declval<const T&>()))> out(rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using QMatrix = Matrix<Rational>;
using QVector = std::vector<Rational>;

QMatrix q_identity(size_t n);

struct Echelon {
  std::vector<size_t> pivots;  // pivot column of each nonzero row
  QMatrix rref;                // rank x cols, reduced row echelon form
  size_t rank() const { return pivots.size(); }
};

// Fraction-free Gauss-Jordan: rows are cleared to integers, eliminated with
// exact Bareiss divisions, and normalized to rational RREF at the end.
Echelon echelon(const QMatrix& a);

size_t rank(const QMatrix& a);

// Kernel basis, one vector per non-pivot column, with a 1 in that column.
std::vector<QVector> nullspace(const QMatrix& a);

// Row-reduce a list of vectors (as rows) and drop zero rows.
std::vector<QVector> rref_rows(const std::vector<QVector>& rows, size_t width);

// One solution of a x = b, free variables set to zero.
std::optional<QVector> solve(const QMatrix& a, const QVector& b);

// Bareiss determinant, exact.
Rational det(const QMatrix& a);

QVector mat_vec(const QMatrix& a, const QVector& v);
bool is_zero(const QVector& v);

}  // namespace mahler
