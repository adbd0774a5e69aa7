#include "mahler/poly.hpp"

#include <algorithm>

#include "mahler/errors.hpp"

namespace mahler {

Poly::Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

Poly::Poly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

Poly Poly::monomial(const Rational& c, size_t deg) {
  if (c == 0) return Poly();
  std::vector<Rational> v(deg + 1);
  v[deg] = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

size_t Poly::valuation() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return i;
  return 0;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()));
  for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return Poly(std::move(v));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<Rational> v(c_.size() + o.c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j] != 0) v[i + j] += c_[i] * o.c_[j];
  }
  return Poly(std::move(v));
}

Poly Poly::operator*(const Rational& s) const {
  if (s == 0) return Poly();
  Poly out = *this;
  for (auto& x : out.c_) x *= s;
  return out;
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

u64 Poly::eval_mod(const ModP& f, u64 x) const {
  u64 acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = f.add(f.mul(acc, x), f.from(c_[i]));
  return acc;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Rational inv = 1 / lead();
  return *this * inv;
}

Poly Poly::shift_down(size_t v) const {
  if (v >= c_.size()) return Poly();
  return Poly(std::vector<Rational>(c_.begin() + static_cast<long>(v), c_.end()));
}

PolyDivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MahlerError(ErrorKind::Input, "polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  long db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<Rational> q(static_cast<size_t>(a.degree() - db + 1));
  Rational inv = 1 / b.lead();
  for (long i = a.degree(); i >= db; --i) {
    Rational c = r[i] * inv;
    if (c == 0) continue;
    q[i - db] = c;
    for (long j = 0; j <= db; ++j) r[i - db + j] -= c * b.coeffs()[j];
  }
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).rem;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return divmod(a * b, gcd(a, b)).quot.monic();
}

Poly pow(const Poly& a, unsigned long e) {
  Poly r(1), base = a;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

RatFunc::RatFunc(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw MahlerError(ErrorKind::Input, "rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Poly();
    den_ = Poly(1);
    return;
  }
  Poly g = gcd(num, den);
  Poly n = divmod(num, g).quot, d = divmod(den, g).quot;
  Rational s = 1 / d.lead();
  num_ = n * s;
  den_ = d * s;
}

long RatFunc::degree() const { return std::max(num_.degree(), den_.degree()); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator-() const {
  RatFunc out = *this;
  out.num_ = -out.num_;
  return out;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_polynomial() && o.is_polynomial()) return RatFunc(num_ * o.num_);
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw MahlerError(ErrorKind::Input, "rational function division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

Rational RatFunc::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw MahlerError(ErrorKind::Input, "rational function evaluated at a pole");
  return num_.eval(x) / d;
}

TruncSeries TruncSeries::from_poly(const Poly& p, size_t order) {
  TruncSeries s(order);
  for (size_t i = 0; i < order && i < p.coeffs().size(); ++i) s.c_[i] = p.coeffs()[i];
  return s;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  size_t n = std::min(order(), o.order());
  TruncSeries s(n);
  for (size_t i = 0; i < n; ++i) s.c_[i] = c_[i] + o.c_[i];
  return s;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  size_t n = std::min(order(), o.order());
  TruncSeries s(n);
  for (size_t i = 0; i < n; ++i) s.c_[i] = c_[i] - o.c_[i];
  return s;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  size_t n = std::min(order(), o.order());
  TruncSeries s(n);
  for (size_t i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; i + j < n; ++j)
      if (o.c_[j] != 0) s.c_[i + j] += c_[i] * o.c_[j];
  }
  return s;
}

TruncSeries TruncSeries::operator*(const Rational& k) const {
  TruncSeries s = *this;
  for (auto& x : s.c_) x *= k;
  return s;
}

TruncSeries TruncSeries::truncated(size_t order) const {
  if (order > c_.size()) throw MahlerError(ErrorKind::InsufficientOrder, "series is too short to truncate");
  return TruncSeries(std::vector<Rational>(c_.begin(), c_.begin() + static_cast<long>(order)));
}

Rational TruncSeries::partial_sum(const Rational& x, size_t terms) const {
  if (terms > c_.size()) throw MahlerError(ErrorKind::InsufficientOrder, "series is too short for the partial sum");
  Rational acc = 0;
  for (size_t i = terms; i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly TruncSeries::as_poly() const { return Poly(c_); }

Poly substitute_power(const Poly& p, unsigned long q) {
  if (q == 0) throw MahlerError(ErrorKind::Input, "substitution power must be positive");
  if (p.is_zero() || q == 1) return p;
  std::vector<Rational> v(static_cast<size_t>(p.degree()) * q + 1);
  for (size_t i = 0; i < p.coeffs().size(); ++i) v[i * q] = p.coeffs()[i];
  return Poly(std::move(v));
}

RatFunc substitute_power(const RatFunc& r, unsigned long q) {
  // z -> z^q preserves coprimality and keeps the denominator monic
  if (r.is_polynomial()) return RatFunc(substitute_power(r.num(), q));
  return RatFunc(substitute_power(r.num(), q), substitute_power(r.den(), q));
}

TruncSeries substitute_power(const TruncSeries& s, unsigned long q) {
  if (q == 0) throw MahlerError(ErrorKind::Input, "substitution power must be positive");
  TruncSeries out(s.order());
  for (size_t i = 0; i * q < s.order(); ++i) out[i * q] = s[i];
  return out;
}

TruncSeries series_of_ratfunc(const RatFunc& r, size_t order) {
  const auto& d = r.den().coeffs();
  if (d.empty() || d[0] == 0) throw MahlerError(ErrorKind::PoleAtOrigin, "denominator vanishes at z = 0");
  TruncSeries s(order);
  Rational inv0 = 1 / d[0];
  for (size_t n = 0; n < order; ++n) {
    Rational acc = r.num().coeff(n);
    for (size_t j = 1; j < d.size() && j <= n; ++j)
      if (d[j] != 0) acc -= d[j] * s[n - j];
    s[n] = acc * inv0;
  }
  return s;
}

std::vector<Rational> recenter(const Poly& p, const Rational& xi) {
  // Taylor shift by repeated synthetic division
  std::vector<Rational> a = p.coeffs();
  long n = p.degree();
  for (long i = 0; i < n; ++i)
    for (long j = n - 1; j >= i; --j) a[j] += xi * a[j + 1];
  return a;
}

std::string to_string(const Poly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (long d = p.degree(); d >= 0; --d) {
    Rational c = p.coeff(d);
    if (c == 0) continue;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (out.empty()) out = neg ? "-" : "";
    else out += neg ? " - " : " + ";
    std::string mono = d == 0 ? "" : (d == 1 ? var : var + "^" + std::to_string(d));
    if (mono.empty()) out += to_string(a);
    else if (a == 1) out += mono;
    else out += to_string(a) + "*" + mono;
  }
  return out;
}

}  // namespace mahler
