#include "mahler/linalg.hpp"

#include <utility>

namespace mahler {

QMatrix q_identity(size_t n) { return QMatrix::identity(n, Rational(1), Rational(0)); }

namespace {

using IRow = std::vector<Integer>;

IRow clear_denominators(const QMatrix& a, size_t i) {
  Integer l = 1;
  for (size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
  IRow row(a.cols());
  for (size_t j = 0; j < a.cols(); ++j) row[j] = a(i, j).get_num() * (l / a(i, j).get_den());
  return row;
}

// Fraction-free Gauss-Jordan.  After processing pivot r every pivot entry
// equals the same leading minor and all divisions by the previous pivot are
// exact (Sylvester's identity), for rows above as well as below.
std::vector<size_t> bareiss_gauss_jordan(std::vector<IRow>& m, size_t cols) {
  std::vector<size_t> pivots;
  Integer prev = 1, t;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < m.size(); ++c) {
    size_t sel = r;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[r]);
    const Integer piv = m[r][c];
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r) continue;
      IRow& row = m[i];
      const Integer f = row[c];
      for (size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        t = piv * row[j];
        if (f != 0) t -= f * m[r][j];
        mpz_divexact(row[j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      row[c] = 0;
    }
    prev = piv;
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

}  // namespace

Echelon echelon(const QMatrix& a) {
  std::vector<IRow> m;
  m.reserve(a.rows());
  for (size_t i = 0; i < a.rows(); ++i) m.push_back(clear_denominators(a, i));
  Echelon out;
  out.pivots = bareiss_gauss_jordan(m, a.cols());
  out.rref = QMatrix(out.pivots.size(), a.cols());
  for (size_t i = 0; i < out.pivots.size(); ++i) {
    const Integer& d = m[i][out.pivots[i]];
    for (size_t j = 0; j < a.cols(); ++j) {
      if (m[i][j] == 0) continue;
      Rational v(m[i][j], d);
      v.canonicalize();
      out.rref(i, j) = v;
    }
  }
  return out;
}

size_t rank(const QMatrix& a) { return echelon(a).rank(); }

std::vector<QVector> nullspace(const QMatrix& a) {
  Echelon e = echelon(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (size_t p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector v(a.cols());
    v[f] = 1;
    for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rref(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<QVector> rref_rows(const std::vector<QVector>& rows, size_t width) {
  QMatrix m(rows.size(), width);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  Echelon e = echelon(m);
  std::vector<QVector> out(e.rank(), QVector(width));
  for (size_t i = 0; i < e.rank(); ++i)
    for (size_t j = 0; j < width; ++j) out[i][j] = e.rref(i, j);
  return out;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  if (b.size() != a.rows()) throw MahlerError(ErrorKind::Input, "right-hand side has wrong length");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = echelon(aug);
  QVector x(a.cols());
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;
    x[e.pivots[i]] = e.rref(i, a.cols());
  }
  return x;
}

Rational det(const QMatrix& a) {
  if (a.rows() != a.cols()) throw MahlerError(ErrorKind::Input, "determinant of a non-square matrix");
  size_t n = a.rows();
  if (n == 0) return 1;
  Integer scale = 1;
  std::vector<IRow> m;
  for (size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    scale *= l;
    m.push_back(clear_denominators(a, i));
  }
  int sign = 1;
  Integer prev = 1, t;
  for (size_t k = 0; k < n; ++k) {
    size_t sel = k;
    while (sel < n && m[sel][k] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != k) {
      std::swap(m[sel], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Rational d(sign * m[n - 1][n - 1], scale);
  d.canonicalize();
  return d;
}

QVector mat_vec(const QMatrix& a, const QVector& v) {
  QVector out(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace mahler
