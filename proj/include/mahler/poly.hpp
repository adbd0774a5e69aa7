#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mahler/modular.hpp"
#include "mahler/rational.hpp"

namespace mahler {

// Dense polynomial in z; coeffs[i] is the coefficient of z^i.  The zero
// polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> c);
  Poly(const Rational& c);  // NOLINT: constants convert implicitly
  Poly(int c) : Poly(Rational(c)) {}  // NOLINT
  static Poly monomial(const Rational& c, size_t deg);
  static Poly z() { return monomial(1, 1); }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  Rational coeff(size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& lead() const { return c_.back(); }
  size_t valuation() const;  // lowest nonzero index; 0 for the zero polynomial

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& s) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return c_ != o.c_; }

  Rational eval(const Rational& x) const;
  u64 eval_mod(const ModP& f, u64 x) const;
  Poly monic() const;
  Poly shift_down(size_t v) const;  // divide by z^v (exact when v <= valuation)

 private:
  void trim();
  std::vector<Rational> c_;
};

// e.g. "z^2 - 1/2*z + 3"; "0" for the zero polynomial.
std::string to_string(const Poly& p, const std::string& var = "z");

struct PolyDivMod {
  Poly quot, rem;
};
PolyDivMod divmod(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic, or zero
Poly lcm(const Poly& a, const Poly& b);  // monic
Poly pow(const Poly& a, unsigned long e);

// Reduced rational function: gcd(num, den) = 1 and den monic.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(const Poly& p) : num_(p), den_(1) {}  // NOLINT
  RatFunc(const Rational& c) : num_(c), den_(1) {}  // NOLINT
  RatFunc(int c) : RatFunc(Rational(c)) {}  // NOLINT
  RatFunc(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  long degree() const;  // max(deg num, deg den)

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  bool pole_at(const Rational& x) const { return den_.eval(x) == 0; }
  Rational eval(const Rational& x) const;  // throws on a pole

 private:
  Poly num_, den_;
};

class TruncSeries {
 public:
  TruncSeries() = default;
  explicit TruncSeries(size_t order) : c_(order) {}
  TruncSeries(std::vector<Rational> c) : c_(std::move(c)) {}  // NOLINT
  static TruncSeries from_poly(const Poly& p, size_t order);

  size_t order() const { return c_.size(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational& operator[](size_t i) { return c_[i]; }
  const Rational& operator[](size_t i) const { return c_[i]; }

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries operator*(const Rational& s) const;
  bool operator==(const TruncSeries& o) const { return c_ == o.c_; }

  TruncSeries truncated(size_t order) const;
  Rational partial_sum(const Rational& x, size_t terms) const;  // sum_{n < terms} c_n x^n
  Poly as_poly() const;

 private:
  std::vector<Rational> c_;
};

Poly substitute_power(const Poly& p, unsigned long q);
RatFunc substitute_power(const RatFunc& r, unsigned long q);
TruncSeries substitute_power(const TruncSeries& s, unsigned long q);

TruncSeries series_of_ratfunc(const RatFunc& r, size_t order);

// Coefficients c with sum_l c_l (z - xi)^l = p(z).
std::vector<Rational> recenter(const Poly& p, const Rational& xi);

}  // namespace mahler
