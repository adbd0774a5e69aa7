#include <doctest.h>

#include <random>

#include "mahler/errors.hpp"
#include "mahler/json_io.hpp"
#include "mahler/kronecker.hpp"
#include "oracles_mahler.hpp"

using namespace mahler;

namespace {

MahlerSystem corpus(const std::string& name) { return load_system(std::string(MAHLER_CORPUS_DIR) + "/" + name + ".json"); }

QMatrix Q(std::initializer_list<std::initializer_list<int>> rows) {
  QMatrix m(rows.size(), rows.begin()->size());
  size_t i = 0;
  for (const auto& r : rows) {
    size_t j = 0;
    for (int x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

Poly P(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return Poly(v);
}

QMatrix random_q(std::mt19937_64& rng, size_t n) {
  QMatrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = oracle::random_rational(rng, -6, 6, 4);
  return m;
}

}  // namespace

TEST_CASE("kron examples") {
  CHECK(kron(q_identity(2), q_identity(2)) == q_identity(4));
  CHECK(kron(Q({{1, 2}, {3, 4}}), Q({{0, 1}, {1, 0}})) ==
        Q({{0, 1, 0, 2}, {1, 0, 2, 0}, {0, 3, 0, 4}, {3, 0, 4, 0}}));
  QMatrix a = Q({{1, -2}, {5, 7}});
  QMatrix c(1, 1);
  c(0, 0) = Rational(3, 2);
  CHECK(kron(a, c) == a.map([](const Rational& x) { return Rational(x * Rational(3, 2)); }));
}

TEST_CASE("kron_power examples") {
  QMatrix a = Q({{1, 2}, {3, 4}});
  CHECK(kron_power(a, 1) == a);
  QMatrix a2 = kron_power(a, 2);
  CHECK(det(a2) == 16);
  CHECK(oracle::leibniz_det(a2) == 16);

  MahlerSystem c2 = corpus("cantor2");
  RMatrix k = kron_power(c2.A, 2);
  RatFunc z(P({0, 1})), z2(P({0, 0, 1})), one(P({1})), zero;
  RMatrix expect(4, 4, zero);
  expect(0, 0) = one; expect(0, 1) = z; expect(0, 2) = z; expect(0, 3) = z2;
  expect(1, 1) = one; expect(1, 3) = z;
  expect(2, 2) = one; expect(2, 3) = z;
  expect(3, 3) = one;
  CHECK(k == expect);
  CHECK_THROWS_AS(kron_power(q_identity(2), 9), MahlerError);
  CHECK(kron_power(q_identity(2), 8).rows() == 256);
}

TEST_CASE("mixed product and determinant identities") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    size_t n = 2 + t % 2, p = 2 + (t / 2) % 2;
    QMatrix a = random_q(rng, n), b = random_q(rng, n), c = random_q(rng, p), d = random_q(rng, p);
    CHECK(kron(a * b, c * d) == kron(a, c) * kron(b, d));
    QMatrix ac = kron(a, c);
    Rational expect = rpow(det(a), p) * rpow(det(c), n);
    CHECK(det(ac) == expect);
    if (ac.rows() <= 6) CHECK(oracle::leibniz_det(ac) == expect);
  }
}

TEST_CASE("monomial index map") {
  MonomialIndexMap m = monomial_index_map(2, 2);
  REQUIRE(m.classes.size() == 3);
  CHECK(m.lambdas[0] == Exponents{2, 0});
  CHECK(m.lambdas[1] == Exponents{1, 1});
  CHECK(m.lambdas[2] == Exponents{0, 2});
  CHECK(m.classes[1] == std::vector<size_t>{1, 2});
  CHECK(m.representative == std::vector<size_t>{0, 1, 3});
  for (size_t mm = 1; mm <= 4; ++mm)
    for (unsigned d = 1; d <= 3; ++d) {
      MonomialIndexMap x = monomial_index_map(mm, d);
      size_t total = 0;
      std::vector<int> hit(x.class_of.size(), 0);
      for (size_t j = 0; j < x.classes.size(); ++j) {
        total += x.classes[j].size();
        CHECK(x.representative[j] == x.classes[j].front());
        for (size_t i : x.classes[j]) ++hit[i];
      }
      CHECK(total == x.class_of.size());
      for (int h : hit) CHECK(h == 1);
      // number of degree-d monomials in mm variables
      Integer binom;
      mpz_bin_uiui(binom.get_mpz_t(), mm + d - 1, d);
      CHECK(Integer(static_cast<unsigned long>(x.classes.size())) == binom);
    }
}

TEST_CASE("kron_system examples") {
  MahlerSystem c2 = corpus("cantor2");
  CHECK(kron_system(c2, 1).A == c2.A);
  MahlerSystem k2 = kron_system(c2, 2);
  CHECK(k2.m == 4);
  auto f = solve_series(c2, 40);
  auto F = solve_series(k2, 40);
  CHECK(F[0] == f[0] * f[0]);
  CHECK(F[1] == f[0]);
  CHECK(F[2] == f[0]);
  CHECK(F[3] == f[1]);

  MahlerSystem c3 = corpus("cantor3");
  auto cert1 = certify_regular(c3, Rational(1, 2));
  auto cert2 = certify_regular(kron_system(c3, 2), Rational(1, 2));
  CHECK(cert1.regular);
  CHECK(cert2.regular);
  CHECK(cert2.checked_upto == cert1.checked_upto);
}

TEST_CASE("Kronecker solution coordinates are products of base coordinates") {
  for (const char* name : {"cantor2", "cantor3", "thue_morse"}) {
    MahlerSystem s = corpus(name);
    auto f = solve_series(s, 48);
    for (unsigned d = 2; d <= 3; ++d) {
      MahlerSystem ks = kron_system(s, d);
      auto F = solve_series(ks, 48);
      MonomialIndexMap map = monomial_index_map(s.m, d);
      for (size_t i = 0; i < F.size(); ++i) {
        TruncSeries prod = TruncSeries::from_poly(Poly(Rational(1)), 48);
        for (size_t r = i, t = 0; t < d; ++t, r /= s.m) prod = prod * f[r % s.m];
        CHECK(F[i] == prod);
        CHECK(F[i] == F[map.representative[map.class_of[i]]]);
      }
      // coefficient bound still dominates
      REQUIRE(ks.coeff_bound.has_value());
      for (const auto& series : F)
        for (size_t n = 0; n < 48; ++n)
          CHECK(abs(series[n]) <= ks.coeff_bound->C * rpow(ks.coeff_bound->rho, n));
    }
  }
}

TEST_CASE("polynomial parser") {
  MultiPoly p = parse_polynomial("X1*X3 - X2*X3 + 1/2*X3^2", 3);
  CHECK(p.size() == 3);
  CHECK(p.at(Exponents{0, 0, 2}) == Rational(1, 2));
  CHECK(p.at(Exponents{0, 1, 1}) == -1);
  MultiPoly sq = parse_polynomial("(X1 - X2 + 1/2*X3)^2", 3);
  CHECK(sq.at(Exponents{1, 1, 0}) == -2);
  CHECK(sq.at(Exponents{0, 0, 2}) == Rational(1, 4));
  CHECK(to_string(p) == "X1*X3 - X2*X3 + 1/2*X3^2");
  CHECK(parse_polynomial("-(X1)", 1).at(Exponents{1}) == -1);
  CHECK_THROWS_AS(parse_polynomial("X4", 3), MahlerError);
  CHECK_THROWS_AS(parse_polynomial("X1 +", 3), MahlerError);
  CHECK_THROWS_AS(parse_polynomial("X1 ** 2", 3), MahlerError);
  CHECK_THROWS_AS(parse_polynomial("0.5*X1", 3), MahlerError);
  CHECK_THROWS_AS(parse_homogeneous("X1 + 1", 3), MahlerError);
  CHECK_THROWS_AS(parse_homogeneous("X1 - X1", 3), MahlerError);
  HomogeneousPoly h = parse_homogeneous("X1*X2 + X3^2", 3);
  CHECK(h.degree == 2);
  CHECK(h.eval({2, 3, 1}) == 7);
}

TEST_CASE("lift_algebraic_relation examples") {
  MahlerSystem c3 = corpus("cantor3");
  HomogeneousPoly p = parse_homogeneous("X1*X3 - X2*X3 + 1/2*X3^2", 3);
  AlgebraicLift lift = lift_algebraic_relation(c3, Rational(1, 2), p, 1, 64);
  std::map<Exponents, Poly> expect{{{1, 0, 1}, P({1})}, {{0, 1, 1}, P({-1})}, {{0, 0, 2}, P({0, 1})}};
  CHECK(lift.coefficients == expect);
  CHECK(format_lift(lift) == "X1*X3 - X2*X3 + z*X3^2");
  CHECK(lift.residual_order >= 64);

  HomogeneousPoly lin = parse_homogeneous("X1 - X2 + 1/2*X3", 3);
  AlgebraicLift l1 = lift_algebraic_relation(c3, Rational(1, 2), lin, 1, 64);
  LiftResult direct = lift_linear_relation(c3, Rational(1, 2), {1, -1, Rational(1, 2)}, 1, 64);
  for (size_t i = 0; i < 3; ++i) {
    Exponents e(3, 0);
    e[i] = 1;
    CHECK(l1.coefficients[e] == direct.coefficients[i]);
  }

  HomogeneousPoly sq = parse_homogeneous("(X1 - X2 + 1/2*X3)^2", 3);
  AlgebraicLift ls = lift_algebraic_relation(c3, Rational(1, 2), sq, 1, 48);
  CHECK(ls.residual_order >= 48);
  for (const auto& [lam, c] : sq.terms) CHECK(ls.coefficients[lam].eval(Rational(1, 2)) == c);
  for (const auto& [lam, c] : ls.coefficients) CHECK(sq.terms.count(lam) + (c.eval(Rational(1, 2)) == 0) >= 1);
  CHECK(algebraic_residual(ls, solve_series(c3, 200)) == 200);
}
