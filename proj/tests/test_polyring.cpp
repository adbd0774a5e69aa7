#include <doctest.h>

#include <random>

#include "mahler/errors.hpp"
#include "mahler/poly.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

Poly P(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return Poly(v);
}

Poly random_poly(std::mt19937_64& rng, int maxdeg) {
  std::vector<Rational> v(rng() % (maxdeg + 1));
  for (auto& x : v) x = oracle::random_rational(rng, -9, 9, 4);
  return Poly(v);
}

// Binomial re-expansion sum_g a_g ((z - xi) + xi)^g, independent of the
// synthetic-division implementation.
std::vector<Rational> binomial_recenter(const Poly& p, const Rational& xi) {
  std::vector<Rational> out(p.coeffs().size());
  for (size_t g = 0; g < p.coeffs().size(); ++g) {
    Integer binom = 1;
    for (size_t l = 0; l <= g; ++l) {
      out[l] += p.coeffs()[g] * Rational(binom) * rpow(xi, g - l);
      binom = binom * Integer(static_cast<unsigned long>(g - l)) / Integer(static_cast<unsigned long>(l + 1));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("poly normalization") {
  CHECK(P({1, 2, 0, 0}).degree() == 1);
  CHECK(P({0, 0}).is_zero());
  CHECK(Poly().degree() == -1);
}

TEST_CASE("substitute_power examples") {
  CHECK(substitute_power(P({1, 1}), 2) == P({1, 0, 1}));
  TruncSeries s(std::vector<Rational>{1, 1, 1});
  TruncSeries t = substitute_power(s, 2);
  CHECK(t.order() == 3);
  CHECK(t == TruncSeries(std::vector<Rational>{1, 0, 1}));
  CHECK(substitute_power(Poly::monomial(1, 3), 3) == Poly::monomial(1, 9));
}

TEST_CASE("series_of_ratfunc examples") {
  TruncSeries g = series_of_ratfunc(RatFunc(P({1}), P({1, -1})), 4);
  CHECK(g == TruncSeries(std::vector<Rational>{1, 1, 1, 1}));
  TruncSeries h = series_of_ratfunc(RatFunc(P({1, -1})), 4);
  CHECK(h == TruncSeries(std::vector<Rational>{1, -1, 0, 0}));
  CHECK_THROWS_AS(series_of_ratfunc(RatFunc(P({1}), P({0, 1})), 4), MahlerError);
  try {
    series_of_ratfunc(RatFunc(P({1}), P({0, 1})), 4);
  } catch (const MahlerError& e) {
    CHECK(e.kind() == ErrorKind::PoleAtOrigin);
  }
}

TEST_CASE("recenter examples") {
  auto a = recenter(P({0, 0, 1}), 1);
  CHECK(a == std::vector<Rational>{1, 2, 1});
  auto b = recenter(P({5}), Rational(7, 3));
  CHECK(b == std::vector<Rational>{5});
  auto c = recenter(P({0, -1, 0, 1}), Rational(1, 2));
  CHECK(c == std::vector<Rational>{Rational(-3, 8), Rational(-1, 4), Rational(3, 2), 1});
  CHECK(c == binomial_recenter(P({0, -1, 0, 1}), Rational(1, 2)));
}

TEST_CASE("ratfunc normalization makes equality structural") {
  RatFunc a(P({2, 2}), P({4, 4}));  // (2+2z)/(4+4z) = 1/2
  CHECK(a == RatFunc(Rational(1, 2)));
  RatFunc b(P({1}), P({2, -1}));  // 1/(2-z) -> -1/(z-2)
  CHECK(b.den() == P({-2, 1}));
  CHECK(b.num() == P({-1}));
  RatFunc c = RatFunc(P({1}), P({1, -1})) + RatFunc(P({1}), P({1, 1}));
  CHECK(c == RatFunc(P({2}), P({1, 0, -1})));
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Poly a = random_poly(rng, 6), b = random_poly(rng, 6), c = random_poly(rng, 6);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b).coeffs() == Poly(oracle::polymul(a.coeffs(), b.coeffs())).coeffs());
  }
}

TEST_CASE("recenter round-trips") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    Poly p = random_poly(rng, 8);
    Rational xi = oracle::random_rational(rng, -5, 5, 3);
    auto c = recenter(p, xi);
    CHECK(c.size() == p.coeffs().size());
    CHECK(c == binomial_recenter(p, xi));
    Poly back;
    Poly shift = P({0, 1}) - Poly(xi);
    for (size_t l = 0; l < c.size(); ++l) back += pow(shift, l) * c[l];
    CHECK(back == p);
  }
}

TEST_CASE("substitute_power is a ring morphism") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    Poly a = random_poly(rng, 5), b = random_poly(rng, 5);
    unsigned long q = 2 + rng() % 3;
    CHECK(substitute_power(a * b, q) == substitute_power(a, q) * substitute_power(b, q));
    CHECK(substitute_power(a + b, q) == substitute_power(a, q) + substitute_power(b, q));
    TruncSeries sa = TruncSeries::from_poly(a, 12), sb = TruncSeries::from_poly(b, 12);
    CHECK(substitute_power(sa * sb, q) == substitute_power(sa, q) * substitute_power(sb, q));
  }
}

TEST_CASE("series_of_ratfunc times den equals num") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    Poly num = random_poly(rng, 4), den = random_poly(rng, 4);
    if (den.is_zero() || den.coeff(0) == 0) continue;
    RatFunc r(num, den);
    const size_t n = 16;
    TruncSeries s = series_of_ratfunc(r, n);
    TruncSeries lhs = s * TruncSeries::from_poly(r.den(), n);
    CHECK(lhs == TruncSeries::from_poly(r.num(), n));
  }
}

TEST_CASE("series of mismatched orders truncate to the minimum") {
  TruncSeries a(std::vector<Rational>{1, 2, 3, 4}), b(std::vector<Rational>{1, 1});
  CHECK((a + b).order() == 2);
  CHECK((a * b) == TruncSeries(std::vector<Rational>{1, 3}));
}
