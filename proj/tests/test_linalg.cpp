#include <doctest.h>

#include <random>

#include "mahler/linalg.hpp"
#include "mahler/modular.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

QMatrix random_matrix(std::mt19937_64& rng, size_t r, size_t c, int range, int den, double zero_frac) {
  QMatrix m(r, c);
  std::uniform_real_distribution<double> u(0, 1);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      if (u(rng) > zero_frac) m(i, j) = oracle::random_rational(rng, -range, range, den);
  return m;
}

std::vector<std::vector<Rational>> rows_of(const QMatrix& m) {
  std::vector<std::vector<Rational>> out(m.rows(), std::vector<Rational>(m.cols()));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("fraction-free RREF matches plain Gauss-Jordan") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    size_t r = 1 + rng() % 7, c = 1 + rng() % 8;
    QMatrix m = random_matrix(rng, r, c, 9, 5, (t % 3) * 0.3);
    // force some rank deficiency
    if (r >= 3 && t % 2) {
      for (size_t j = 0; j < c; ++j) m(2, j) = m(0, j) * Rational(3, 2) - m(1, j);
    }
    std::vector<size_t> piv;
    auto ref = oracle::rref(rows_of(m), &piv);
    Echelon e = echelon(m);
    CHECK(e.pivots == piv);
    CHECK(rows_of(e.rref) == ref);
  }
}

TEST_CASE("nullspace, solve and det") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
    QMatrix m = random_matrix(rng, r, c, 5, 3, 0.4);
    auto ker = nullspace(m);
    CHECK(ker.size() + rank(m) == c);
    CHECK(ker == oracle::nullspace(rows_of(m), c));
    for (const auto& v : ker) CHECK(is_zero(mat_vec(m, v)));
    QVector x0(c);
    for (auto& x : x0) x = oracle::random_rational(rng, -4, 4, 2);
    QVector b = mat_vec(m, x0);
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    CHECK(mat_vec(m, *x) == b);
  }
  QMatrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  CHECK(det(a) == -2);
  QMatrix s(2, 2);
  s(0, 0) = 1; s(0, 1) = 2; s(1, 0) = 2; s(1, 1) = 4;
  CHECK(det(s) == 0);
  QVector b{1, 0};
  CHECK_FALSE(solve(s, b).has_value());
}

TEST_CASE("det against cofactor expansion") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    QMatrix m = random_matrix(rng, 3, 3, 9, 4, 0.2);
    Rational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    CHECK(det(m) == cof);
  }
}

TEST_CASE("modular echelon and reconstruction") {
  const auto& ps = big_primes(3);
  CHECK(ps[0] < (u64(1) << 62));
  CHECK(is_prime_u64(ps[0]));
  CHECK(is_prime_u64(ps[1]));
  CHECK_FALSE(is_prime_u64(ps[0] - 2 * 3));
  ModP f{ps[0]};
  CHECK(f.mul(f.from(Rational(1, 3)), 3) == 1);
  CHECK(f.from(Rational(-1)) == ps[0] - 1);

  std::mt19937_64 rng(24);
  for (int t = 0; t < 50; ++t) {
    size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
    QMatrix m = random_matrix(rng, r, c, 9, 3, 0.3);
    ModEchelon me(f, c);
    for (size_t i = 0; i < r; ++i) {
      std::vector<u64> row(c);
      for (size_t j = 0; j < c; ++j) row[j] = f.from(m(i, j));
      me.add_row(row);
    }
    Echelon e = echelon(m);
    CHECK(me.rank() == e.rank());
    CHECK(me.pivots() == e.pivots);
    auto rows = me.sorted_rows();
    for (size_t i = 0; i < e.rank(); ++i)
      for (size_t j = 0; j < c; ++j) {
        auto rr = rational_reconstruct(Integer(std::to_string(rows[i][j])), Integer(std::to_string(ps[0])));
        REQUIRE(rr.has_value());
        CHECK(*rr == e.rref(i, j));
      }
  }
}
