#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace mahler {

using Integer = mpz_class;
using Rational = mpq_class;  // mpq keeps numerator/denominator coprime, denominator > 0

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Rational rpow(const Rational& base, unsigned long exp);
Integer ipow(const Integer& base, unsigned long exp);

// Natural-log value. abs_err bounds |value - true|; the certified relative
// error reported to users is abs_err / max(1, |true|) bounded from above.
struct LogValue {
  double value = 0.0;
  double abs_err = 0.0;

  double certified_rel_error() const;

  LogValue operator+(const LogValue& o) const;
  LogValue operator-(const LogValue& o) const;
  LogValue scaled(double c) const;  // c exactly representable, e.g. small integers
};

std::string format_log(const LogValue& v);  // 15 significant digits

LogValue log_of_integer(const Integer& n);  // n > 0
LogValue log_abs(const Rational& r);        // r != 0
LogValue weil_height(const Rational& r);

struct LiouvilleReport {
  bool holds = false;
  LogValue slack;
};
LiouvilleReport liouville_check(const Rational& r);

// Exact integer form of log|r| >= -h(r): |p| * max(|p|,|q|) >= |q|.
bool liouville_holds_exact(const Rational& r);

// Integer H = max(|p|, |q|) so that h(r) = log H.
Integer height_integer(const Rational& r);

LogValue poly_eval_height_bound(const std::vector<unsigned long>& degrees,
                                const std::vector<LogValue>& coeff_heights,
                                const std::vector<LogValue>& arg_heights);

// Exact comparisons used where a bound must be certified rather than estimated.
int cmp_abs(const Rational& a, const Rational& b);
Rational abs(const Rational& r);

}  // namespace mahler
