#include "mahler/rational.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

bool all_digits(const std::string& s, size_t from, size_t to) {
  if (from >= to) return false;
  for (size_t i = from; i < to; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

constexpr double kUlp = std::numeric_limits<double>::epsilon();

}  // namespace

Rational parse_rational(const std::string& s) {
  size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  size_t slash = s.find('/');
  bool ok = slash == std::string::npos ? all_digits(s, start, s.size())
                                       : all_digits(s, start, slash) && all_digits(s, slash + 1, s.size());
  if (!ok) throw MahlerError(ErrorKind::Input, "not a rational number: '" + s + "'");
  std::string body = s[0] == '+' ? s.substr(1) : s;
  Rational r;
  if (slash == std::string::npos) {
    r = Rational(Integer(body, 10));
  } else {
    size_t sl = body.find('/');
    Integer num(body.substr(0, sl), 10), den(body.substr(sl + 1), 10);
    if (den == 0) throw MahlerError(ErrorKind::Input, "zero denominator in '" + s + "'");
    r = Rational(num, den);
    r.canonicalize();
  }
  return r;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str(10);
  return r.get_num().get_str(10) + "/" + r.get_den().get_str(10);
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational rpow(const Rational& base, unsigned long exp) {
  Rational out(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
  return out;  // already canonical: powers of coprime integers stay coprime
}

LogValue LogValue::operator+(const LogValue& o) const {
  double v = value + o.value;
  return {v, abs_err + o.abs_err + kUlp * std::fabs(v)};
}

LogValue LogValue::operator-(const LogValue& o) const {
  double v = value - o.value;
  return {v, abs_err + o.abs_err + kUlp * std::fabs(v)};
}

LogValue LogValue::scaled(double c) const {
  double v = c * value;
  return {v, std::fabs(c) * abs_err + kUlp * std::fabs(v)};
}

double LogValue::certified_rel_error() const {
  double denom = std::fabs(value) - abs_err;
  return abs_err / (denom > 1.0 ? denom : 1.0);
}

std::string format_log(const LogValue& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v.value);
  return buf;
}

LogValue log_of_integer(const Integer& n) {
  if (n <= 0) throw MahlerError(ErrorKind::Input, "log of a non-positive integer");
  long e = 0;
  double d = mpz_get_d_2exp(&e, n.get_mpz_t());  // n = d * 2^e, d in [0.5, 1)
  double v = std::log(d) + static_cast<double>(e) * M_LN2;
  double err = 4 * kUlp + 2 * kUlp * std::fabs(static_cast<double>(e)) * M_LN2 + kUlp * std::fabs(v);
  return {v, err};
}

LogValue log_abs(const Rational& r) {
  if (r == 0) throw MahlerError(ErrorKind::Input, "log_abs of zero");
  long ep = 0, eq = 0;
  double dp = std::fabs(mpz_get_d_2exp(&ep, r.get_num().get_mpz_t()));
  double dq = mpz_get_d_2exp(&eq, r.get_den().get_mpz_t());
  double e = static_cast<double>(ep - eq);
  double v = std::log(dp / dq) + e * M_LN2;
  double err = 6 * kUlp + 2 * kUlp * std::fabs(e) * M_LN2 + kUlp * std::fabs(v);
  return {v, err};
}

Integer height_integer(const Rational& r) {
  Integer p = ::abs(r.get_num());
  const Integer& q = r.get_den();
  return p > q ? p : q;
}

LogValue weil_height(const Rational& r) { return log_of_integer(height_integer(r)); }

bool liouville_holds_exact(const Rational& r) {
  Integer p = ::abs(r.get_num());
  return p * height_integer(r) >= r.get_den();
}

LiouvilleReport liouville_check(const Rational& r) {
  if (r == 0) throw MahlerError(ErrorKind::Input, "liouville_check of zero");
  Integer p = ::abs(r.get_num());
  // slack = log|r| + h(r) = log(|p| * H / q), a rational >= 1
  Rational s(p * height_integer(r), r.get_den());
  s.canonicalize();
  return {liouville_holds_exact(r), log_abs(s)};
}

LogValue poly_eval_height_bound(const std::vector<unsigned long>& degrees,
                                const std::vector<LogValue>& coeff_heights,
                                const std::vector<LogValue>& arg_heights) {
  if (degrees.size() != arg_heights.size())
    throw MahlerError(ErrorKind::Input, "degree and argument lists differ in length");
  LogValue total{0.0, 0.0};
  for (size_t i = 0; i < degrees.size(); ++i) {
    total = total + log_of_integer(Integer(degrees[i]) + 1);
    total = total + arg_heights[i].scaled(static_cast<double>(degrees[i]));
  }
  for (const auto& h : coeff_heights) total = total + h;
  return total;
}

int cmp_abs(const Rational& a, const Rational& b) { return cmp(::abs(a), ::abs(b)); }

Rational abs(const Rational& r) { return ::abs(r); }

}  // namespace mahler
