#include <doctest.h>
#include <mpfr.h>

#include <cmath>
#include <random>

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

// 200-bit MPFR value of log|r|, used as the reference logarithm.
double mpfr_log_abs(const Rational& r) {
  mpfr_t x;
  mpfr_init2(x, 200);
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(x, x, MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return d;
}

void check_close(const LogValue& v, double truth) {
  CHECK(std::fabs(v.value - truth) <= v.abs_err + 1e-300);
  CHECK(v.certified_rel_error() <= 1e-12);
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-10/5")) == "-2");
  CHECK(to_string(parse_rational("0/7")) == "0");
  CHECK(to_string(parse_rational("+3")) == "3");
  CHECK(parse_rational("0").get_den() == 1);
  CHECK_THROWS_AS(parse_rational("1/0"), MahlerError);
  CHECK_THROWS_AS(parse_rational("1e5"), MahlerError);
  CHECK_THROWS_AS(parse_rational("0.5"), MahlerError);
  CHECK_THROWS_AS(parse_rational(""), MahlerError);
  CHECK_THROWS_AS(parse_rational("1/-2"), MahlerError);
}

TEST_CASE("weil_height examples") {
  CHECK(weil_height(0).value == 0.0);
  check_close(weil_height(Rational(3, 2)), std::log(3.0));
  check_close(weil_height(Rational(1, 256)), 8 * std::log(2.0));
}

TEST_CASE("liouville_check examples") {
  auto a = liouville_check(Rational(3, 7));
  CHECK(a.holds);
  check_close(a.slack, std::log(3.0));
  auto b = liouville_check(Rational(-1));
  CHECK(b.holds);
  CHECK(b.slack.value == 0.0);
  auto c = liouville_check(Rational(1, 5));
  CHECK(c.holds);
  CHECK(c.slack.value == 0.0);
  CHECK_THROWS_AS(liouville_check(0), MahlerError);
}

TEST_CASE("log_abs examples against an MPFR oracle") {
  check_close(log_abs(Rational(1, 2)), -std::log(2.0));
  check_close(log_abs(Rational(ipow(2, 1000))), 1000 * std::log(2.0));
  LogValue v = log_abs(Rational(3, 7));
  check_close(v, mpfr_log_abs(Rational(3, 7)));
  CHECK(std::fabs(v.value - (-0.8472978603872037)) < 1e-15);
  CHECK_THROWS_AS(log_abs(0), MahlerError);
}

TEST_CASE("log_abs on huge and near-one rationals") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Integer p = ipow(3, rng() % 3000) + Integer(static_cast<unsigned long>(rng() % 1000));
    Integer q = ipow(7, rng() % 1500) + 1;
    Rational r(p, q);
    r.canonicalize();
    check_close(log_abs(r), mpfr_log_abs(r));
  }
  Rational near_one(ipow(10, 40) + 1, ipow(10, 40));
  check_close(log_abs(near_one), mpfr_log_abs(near_one));
}

TEST_CASE("poly_eval_height_bound examples") {
  // P = X1 X2 at (2, 3), unit coefficient
  LogValue b1 = poly_eval_height_bound({1, 1}, {weil_height(1)}, {weil_height(2), weil_height(3)});
  check_close(b1, 3 * std::log(2.0) + std::log(3.0));
  // constant c
  LogValue b2 = poly_eval_height_bound({}, {weil_height(Rational(5, 3))}, {});
  check_close(b2, std::log(5.0));
  // P = X1^2 at 1/2
  LogValue b3 = poly_eval_height_bound({2}, {weil_height(1)}, {weil_height(Rational(1, 2))});
  check_close(b3, std::log(3.0) + 2 * std::log(2.0));
  CHECK(weil_height(Rational(1, 4)).value <= b3.value);
}

TEST_CASE("height rules hold on random rationals") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    Rational a = oracle::random_rational(rng, -1000, 1000, 999);
    Rational b = oracle::random_rational(rng, -1000, 1000, 999);
    LogValue ha = weil_height(a), hb = weil_height(b);
    double tol = ha.abs_err + hb.abs_err + 1e-12;
    CHECK(weil_height(a + b).value <= ha.value + hb.value + std::log(2.0) + tol);
    CHECK(weil_height(a * b).value <= ha.value + hb.value + tol);
  }
}

TEST_CASE("h(a^n) = |n| h(a) at the integer level") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Rational a = oracle::random_rational(rng, -500, 500, 500);
    if (a == 0) continue;
    unsigned long n = rng() % 40;
    CHECK(height_integer(rpow(a, n)) == ipow(height_integer(a), n));
    Rational inv = 1 / a;
    CHECK(height_integer(rpow(inv, n)) == ipow(height_integer(a), n));
  }
}

TEST_CASE("liouville holds for every nonzero rational") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    Rational a = oracle::random_rational(rng, -100000, 100000, 100000);
    if (a == 0) continue;
    CHECK(liouville_holds_exact(a));
    CHECK(liouville_check(a).slack.value >= -liouville_check(a).slack.abs_err);
  }
}

TEST_CASE("poly_eval_height_bound dominates the exact height") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    // random P in two variables with degrees <= 3
    unsigned d1 = rng() % 4, d2 = rng() % 4;
    std::vector<Rational> coeffs;
    std::vector<LogValue> ch;
    for (unsigned i = 0; i <= d1; ++i)
      for (unsigned j = 0; j <= d2; ++j) {
        coeffs.push_back(oracle::random_rational(rng, -20, 20, 9));
        ch.push_back(weil_height(coeffs.back()));
      }
    Rational b1 = oracle::random_rational(rng, -30, 30, 30), b2 = oracle::random_rational(rng, -30, 30, 30);
    Rational val = 0;
    size_t idx = 0;
    for (unsigned i = 0; i <= d1; ++i)
      for (unsigned j = 0; j <= d2; ++j) val += coeffs[idx++] * rpow(b1, i) * rpow(b2, j);
    LogValue bound = poly_eval_height_bound({d1, d2}, ch, {weil_height(b1), weil_height(b2)});
    CHECK(weil_height(val).value <= bound.value + bound.abs_err);
  }
}
