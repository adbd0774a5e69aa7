#include "mahler/kronecker.hpp"

#include <algorithm>
#include <cctype>

#include "mahler/errors.hpp"

namespace mahler {

void check_kron_size(size_t m, unsigned d, size_t cap) {
  Integer size = ipow(Integer(static_cast<unsigned long>(m)), d);
  if (size > Integer(static_cast<unsigned long>(cap)))
    throw MahlerError(ErrorKind::SizeBudgetExceeded,
                      "m^d = " + size.get_str() + " exceeds the cap " + std::to_string(cap));
}

QVector kron(const QVector& a, const QVector& b) {
  QVector out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

MonomialIndexMap monomial_index_map(size_t m, unsigned d, size_t cap) {
  if (d < 1) throw MahlerError(ErrorKind::Input, "degree must be at least 1");
  check_kron_size(m, d, cap);
  MonomialIndexMap map;
  map.m = m;
  map.d = d;
  size_t n = ipow(Integer(static_cast<unsigned long>(m)), d).get_ui();
  map.class_of.assign(n, 0);
  std::map<Exponents, size_t> seen;
  for (size_t i = 0; i < n; ++i) {
    Exponents lam(m, 0);
    for (size_t r = i, t = 0; t < d; ++t, r /= m) ++lam[r % m];
    auto it = seen.find(lam);
    if (it == seen.end()) {
      it = seen.emplace(lam, map.lambdas.size()).first;
      map.lambdas.push_back(lam);
      map.classes.emplace_back();
      map.representative.push_back(i);
    }
    map.classes[it->second].push_back(i);
    map.class_of[i] = it->second;
  }
  return map;
}

MahlerSystem kron_system(const MahlerSystem& sys, unsigned d, size_t cap) {
  if (d == 1) return sys;
  MahlerSystem out;
  out.name = sys.name + "^kron" + std::to_string(d);
  out.q = sys.q;
  out.A = kron_power(sys.A, d, cap);
  out.m = out.A.rows();
  QVector f0 = sys.f0 ? *sys.f0 : default_initial_vector(sys);
  QVector acc = f0;
  for (unsigned t = 1; t < d; ++t) acc = kron(acc, f0);
  out.f0 = acc;
  if (sys.coeff_bound) {
    // (n+1)^(d-1) (2/3)^n peaks near n = (d-1)/log(3/2); scan well past it
    Rational k = 0, two_thirds(2, 3);
    for (unsigned long n = 0; n <= 8ul * d + 16; ++n) {
      Rational v = Rational(ipow(Integer(n + 1), d - 1)) * rpow(two_thirds, n);
      if (v > k) k = v;
    }
    out.coeff_bound = CoeffBound{rpow(sys.coeff_bound->C, d) * k, sys.coeff_bound->rho * Rational(3, 2)};
  }
  out.validate();
  return out;
}

Rational HomogeneousPoly::eval(const QVector& x) const {
  if (x.size() != m) throw MahlerError(ErrorKind::Input, "point has the wrong dimension");
  Rational acc = 0;
  for (const auto& [lam, c] : terms) {
    Rational t = c;
    for (size_t i = 0; i < m; ++i) t *= rpow(x[i], lam[i]);
    acc += t;
  }
  return acc;
}

namespace {

MultiPoly mp_add(MultiPoly a, const MultiPoly& b, int sign) {
  for (const auto& [e, c] : b) {
    Rational& slot = a[e];
    slot += sign > 0 ? c : Rational(-c);
    if (slot == 0) a.erase(e);
  }
  return a;
}

MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

MultiPoly mp_const(size_t m, const Rational& c) {
  MultiPoly p;
  if (c != 0) p[Exponents(m, 0)] = c;
  return p;
}

class Parser {
 public:
  Parser(const std::string& s, size_t m) : s_(s), m_(m) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw MahlerError(ErrorKind::Input, "polynomial parse error at position " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return s_.substr(start, pos_ - start);
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    while (true) {
      if (eat('+')) acc = mp_add(acc, term(), 1);
      else if (eat('-')) acc = mp_add(acc, term(), -1);
      else return acc;
    }
  }
  MultiPoly term() {
    MultiPoly acc = power();
    while (eat('*')) acc = mp_mul(acc, power());
    return acc;
  }
  MultiPoly power() {
    MultiPoly base = unary();
    if (eat('^')) {
      std::string e = digits();
      if (e.size() > 4) fail("exponent too large");
      MultiPoly out = mp_const(m_, 1);
      for (int i = std::stoi(e); i > 0; --i) out = mp_mul(out, base);
      return out;
    }
    return base;
  }
  MultiPoly unary() {
    if (eat('-')) return mp_add(MultiPoly{}, unary(), -1);
    if (eat('+')) return unary();
    return primary();
  }
  MultiPoly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == 'X' || c == 'x') {
      ++pos_;
      std::string k = digits();
      if (k.size() > 6) fail("variable index too large");
      size_t idx = std::stoul(k);
      if (idx < 1 || idx > m_) fail("variable X" + k + " outside X1..X" + std::to_string(m_));
      Exponents e(m_, 0);
      e[idx - 1] = 1;
      return MultiPoly{{e, Rational(1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      size_t save = pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          std::string den = digits();
          return mp_const(m_, parse_rational(num + "/" + den));
        }
        fail("expected a denominator");
      }
      pos_ = save;
      return mp_const(m_, parse_rational(num));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  size_t m_;
  size_t pos_ = 0;
};

unsigned total(const Exponents& e) {
  unsigned t = 0;
  for (unsigned x : e) t += x;
  return t;
}

std::string monomial_string(const Exponents& e) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!s.empty()) s += "*";
    s += "X" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// Terms in descending graded-lex order of the exponents.
template <class C, class Fmt>
std::string join_terms(const std::map<Exponents, C>& terms, Fmt fmt) {
  std::vector<const std::pair<const Exponents, C>*> order;
  for (const auto& t : terms) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    unsigned ta = total(a->first), tb = total(b->first);
    if (ta != tb) return ta > tb;
    return a->first > b->first;
  });
  std::string out;
  for (auto* t : order) {
    auto [neg, body] = fmt(t->second);
    if (body.empty()) continue;
    std::string mono = monomial_string(t->first);
    std::string piece = mono == "1" ? body : (body == "1" ? mono : body + "*" + mono);
    if (out.empty()) out = neg ? "-" + piece : piece;
    else out += (neg ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

MultiPoly parse_polynomial(const std::string& text, size_t m) { return Parser(text, m).parse(); }

HomogeneousPoly parse_homogeneous(const std::string& text, size_t m) {
  MultiPoly p = parse_polynomial(text, m);
  if (p.empty()) throw MahlerError(ErrorKind::Input, "the zero polynomial has no degree");
  unsigned d = total(p.begin()->first);
  for (const auto& [e, c] : p)
    if (total(e) != d)
      throw MahlerError(ErrorKind::Input,
                        "polynomial is not homogeneous; add a unit coordinate with augment_with_unit and "
                        "homogenize by it (X1 on the augmented system)");
  if (d == 0) throw MahlerError(ErrorKind::Input, "a nonzero constant is not a relation");
  HomogeneousPoly h;
  h.m = m;
  h.degree = d;
  h.terms = std::move(p);
  return h;
}

std::string to_string(const MultiPoly& p) {
  return join_terms(p, [](const Rational& c) {
    Rational a = c < 0 ? Rational(-c) : c;
    return std::pair<bool, std::string>(c < 0, to_string(a));
  });
}

QVector kron_tau(const HomogeneousPoly& p, const MonomialIndexMap& map) {
  QVector tau(map.class_of.size());
  for (const auto& [lam, c] : p.terms) {
    auto it = std::find(map.lambdas.begin(), map.lambdas.end(), lam);
    if (it == map.lambdas.end()) throw MahlerError(ErrorKind::Input, "term outside the degree-d monomials");
    tau[map.representative[static_cast<size_t>(it - map.lambdas.begin())]] = c;
  }
  return tau;
}

AlgebraicLift lift_algebraic_relation(const MahlerSystem& sys, const Rational& alpha, const HomogeneousPoly& p, long D,
                                      size_t N, bool escalate, long cap) {
  if (p.m != sys.m) throw MahlerError(ErrorKind::Input, "polynomial variables do not match the system size");
  MonomialIndexMap map = monomial_index_map(sys.m, p.degree);
  MahlerSystem ks = kron_system(sys, p.degree);
  QVector tau = kron_tau(p, map);
  LiftResult lin = escalate ? lift_with_escalation(ks, alpha, tau, D, N, cap) : lift_linear_relation(ks, alpha, tau, D, N);

  AlgebraicLift out;
  out.m = sys.m;
  out.degree = p.degree;
  out.lift_degree = lin.degree;
  out.order = lin.order;
  out.degrees_tried = lin.degrees_tried;
  out.tau = tau;
  for (size_t j = 0; j < map.lambdas.size(); ++j) {
    Poly c;
    for (size_t i : map.classes[j]) c += lin.coefficients[i];
    if (!c.is_zero()) out.coefficients[map.lambdas[j]] = c;
  }
  out.residual_order = algebraic_residual(out, solve_series(sys, 2 * lin.order));
  return out;
}

size_t algebraic_residual(const AlgebraicLift& lift, const std::vector<TruncSeries>& f) {
  size_t order = f.empty() ? 0 : f[0].order();
  for (const auto& s : f) order = std::min(order, s.order());
  TruncSeries acc(order);
  for (const auto& [lam, c] : lift.coefficients) {
    TruncSeries t = TruncSeries::from_poly(c, order);
    for (size_t i = 0; i < lam.size(); ++i)
      for (unsigned e = 0; e < lam[i]; ++e) t = t * f[i];
    acc = acc + t;
  }
  for (size_t n = 0; n < order; ++n)
    if (acc[n] != 0) return n;
  return order;
}

std::string format_lift(const AlgebraicLift& lift) {
  return join_terms(lift.coefficients, [](const Poly& c) {
    if (c.is_zero()) return std::pair<bool, std::string>(false, "");
    size_t nz = 0;
    for (const auto& x : c.coeffs()) nz += x != 0;
    if (nz == 1) {
      bool neg = c.lead() < 0;
      Poly a = neg ? c * Rational(-1) : c;
      return std::pair<bool, std::string>(neg, to_string(a));
    }
    return std::pair<bool, std::string>(false, "(" + to_string(c) + ")");
  });
}

}  // namespace mahler
