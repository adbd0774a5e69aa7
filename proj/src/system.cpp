#include "mahler/system.hpp"

#include <algorithm>

namespace mahler {

RMatrix r_identity(size_t n) { return RMatrix::identity(n, RatFunc(1), RatFunc(0)); }

RMatrix substitute_power(const RMatrix& a, unsigned long q) {
  return a.map([q](const RatFunc& r) { return substitute_power(r, q); });
}

long degree(const RMatrix& a) {
  long d = 0;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) d = std::max(d, a(i, j).degree());
  return d;
}

QMatrix eval(const RMatrix& a, const Rational& x) {
  QMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      const RatFunc& r = a(i, j);
      if (r.is_zero()) continue;
      Rational d = r.den().eval(x);
      if (d == 0) throw MahlerError(ErrorKind::NotRegularAt, "matrix entry has a pole at the evaluation point", -1);
      out(i, j) = r.num().eval(x) / d;
    }
  return out;
}

// Bareiss over Q[z] after clearing each row's denominators.
RatFunc det(const RMatrix& a) {
  size_t n = a.rows();
  if (n != a.cols()) throw MahlerError(ErrorKind::Input, "determinant of a non-square matrix");
  if (n == 0) return RatFunc(1);
  Poly scale(1);
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (size_t i = 0; i < n; ++i) {
    Poly l(1);
    for (size_t j = 0; j < n; ++j) l = lcm(l, a(i, j).den());
    scale = scale * l;
    for (size_t j = 0; j < n; ++j) m[i][j] = a(i, j).num() * divmod(l, a(i, j).den()).quot;
  }
  int sign = 1;
  Poly prev(1);
  for (size_t k = 0; k < n; ++k) {
    size_t sel = k;
    while (sel < n && m[sel][k].is_zero()) ++sel;
    if (sel == n) return RatFunc(0);
    if (sel != k) {
      std::swap(m[sel], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = divmod(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev).quot;
      m[i][k] = Poly();
    }
    prev = m[k][k];
  }
  return RatFunc(m[n - 1][n - 1] * Rational(sign), scale);
}

bool MahlerSystem::pole_free_at_origin() const {
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      if (A(i, j).den().coeff(0) == 0) return false;
  return true;
}

void MahlerSystem::validate() const {
  if (q < 2) throw MahlerError(ErrorKind::Input, "q must be at least 2");
  if (m < 1 || A.rows() != m || A.cols() != m) throw MahlerError(ErrorKind::Input, "A must be an m x m matrix");
  if (det(A).is_zero()) throw MahlerError(ErrorKind::Input, "det A vanishes identically");
  if (f0) {
    if (f0->size() != m) throw MahlerError(ErrorKind::Input, "f0 must have m entries");
    if (pole_free_at_origin()) {
      QMatrix a0 = eval(A, 0);
      QVector r = mat_vec(a0, *f0);
      for (size_t i = 0; i < m; ++i)
        if (r[i] != (*f0)[i])
          throw MahlerError(ErrorKind::InconsistentInitialVector, "(A(0) - I) f0 is not zero");
    }
  }
  if (coeff_bound && (coeff_bound->C < 0 || coeff_bound->rho < 0))
    throw MahlerError(ErrorKind::Input, "coeff_bound entries must be non-negative");
}

RMatrix cocycle(const MahlerSystem& sys, unsigned k, long degree_budget) {
  long d = degree(sys.A);
  long estimate = 0, qk = 1;
  for (unsigned i = 0; i < k; ++i) {
    estimate += d * qk;
    if (estimate > degree_budget)
      throw MahlerError(ErrorKind::DegreeBudgetExceeded, "symbolic cocycle degree exceeds the budget", k);
    qk *= static_cast<long>(sys.q);
  }
  RMatrix acc = r_identity(sys.m);
  unsigned long qi = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc = acc * substitute_power(sys.A, qi);
    qi *= sys.q;
  }
  return acc;
}

CocycleChain::CocycleChain(const MahlerSystem& sys, const Rational& alpha)
    : sys_(&sys), alpha_(alpha), detA_(det(sys.A)) {
  mats_.push_back(q_identity(sys.m));
  ws_.push_back(alpha);
}

void CocycleChain::extend_to(unsigned k) {
  while (mats_.size() <= k) {
    long j = static_cast<long>(mats_.size()) - 1;
    w(static_cast<unsigned>(j) + 1);
    const Rational beta = ws_[j];
    QMatrix ab;
    try {
      ab = eval(sys_->A, beta);
    } catch (const MahlerError&) {
      throw MahlerError(ErrorKind::NotRegularAt, "A has a pole at alpha^(q^" + std::to_string(j) + ")", j);
    }
    if (detA_.num().eval(beta) == 0)
      throw MahlerError(ErrorKind::NotRegularAt, "A is singular at alpha^(q^" + std::to_string(j) + ")", j);
    mats_.push_back(mats_.back() * ab);
  }
}

const QMatrix& CocycleChain::A(unsigned k) {
  extend_to(k);
  return mats_[k];
}

const Rational& CocycleChain::w(unsigned k) {
  while (ws_.size() <= k) ws_.push_back(rpow(ws_.back(), sys_->q));
  return ws_[k];
}

QMatrix eval_cocycle(const MahlerSystem& sys, const Rational& alpha, unsigned k) {
  CocycleChain chain(sys, alpha);
  return chain.A(k);
}

ModCocycleChain::ModCocycleChain(const MahlerSystem& sys, const Rational& alpha, const ModP& f)
    : sys_(&sys), f_(f) {
  std::vector<u64> id(sys.m * sys.m, 0);
  for (size_t i = 0; i < sys.m; ++i) id[i * sys.m + i] = 1;
  mats_.push_back(id);
  ws_.push_back(f.from(alpha));
}

void ModCocycleChain::extend_to(unsigned k) {
  size_t m = sys_->m;
  while (mats_.size() <= k) {
    u64 beta = ws_[mats_.size() - 1];
    std::vector<u64> ab(m * m);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        const RatFunc& r = sys_->A(i, j);
        if (r.is_zero()) continue;
        u64 d = r.den().eval_mod(f_, beta);
        if (d == 0) throw MahlerError(ErrorKind::BadPrime, "pole modulo p");
        ab[i * m + j] = f_.mul(r.num().eval_mod(f_, beta), f_.inv(d));
      }
    const auto& prev = mats_.back();
    std::vector<u64> out(m * m, 0);
    for (size_t i = 0; i < m; ++i)
      for (size_t l = 0; l < m; ++l) {
        u64 a = prev[i * m + l];
        if (!a) continue;
        for (size_t j = 0; j < m; ++j) out[i * m + j] = f_.add(out[i * m + j], f_.mul(a, ab[l * m + j]));
      }
    mats_.push_back(std::move(out));
  }
}

const std::vector<u64>& ModCocycleChain::A(unsigned k) {
  w(k);
  extend_to(k);
  return mats_[k];
}

u64 ModCocycleChain::w(unsigned k) {
  while (ws_.size() <= k) ws_.push_back(f_.pow(ws_.back(), sys_->q));
  return ws_[k];
}

QVector default_initial_vector(const MahlerSystem& sys) {
  if (!sys.pole_free_at_origin()) throw MahlerError(ErrorKind::PoleAtOrigin, "A has a pole at z = 0");
  QMatrix a0 = eval(sys.A, 0);
  for (size_t i = 0; i < sys.m; ++i) a0(i, i) -= 1;
  auto ker = nullspace(a0);
  if (ker.size() >= 2)
    throw MahlerError(ErrorKind::AmbiguousInitialVector,
                      "ker(A(0) - I) has dimension " + std::to_string(ker.size()) + "; supply f0",
                      static_cast<long>(ker.size()));
  if (ker.empty()) return QVector(sys.m);
  QVector v = ker[0];
  Rational lead = 0;
  for (const auto& x : v)
    if (x != 0) {
      lead = x;
      break;
    }
  for (auto& x : v) x /= lead;
  return v;
}

Series solve_series(const MahlerSystem& sys, size_t order) {
  if (!sys.pole_free_at_origin()) throw MahlerError(ErrorKind::PoleAtOrigin, "A has a pole at z = 0");
  size_t m = sys.m;
  QVector f0;
  if (sys.f0) {
    f0 = *sys.f0;
    QVector r = mat_vec(eval(sys.A, 0), f0);
    for (size_t i = 0; i < m; ++i)
      if (r[i] != f0[i]) throw MahlerError(ErrorKind::InconsistentInitialVector, "(A(0) - I) f0 is not zero");
  } else {
    f0 = default_initial_vector(sys);
  }
  std::vector<std::vector<TruncSeries>> as(m, std::vector<TruncSeries>(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) as[i][j] = series_of_ratfunc(sys.A(i, j), order);
  Series f(m, TruncSeries(order));
  if (order == 0) return f;
  for (size_t i = 0; i < m; ++i) f[i][0] = f0[i];
  for (size_t n = 1; n < order; ++n) {
    for (size_t i = 0; i < m; ++i) {
      Rational acc = 0;
      for (size_t j = 0; j * sys.q <= n; ++j) {
        size_t a = n - j * sys.q;
        for (size_t l = 0; l < m; ++l) {
          const Rational& c = as[i][l][a];
          if (c != 0 && f[l][j] != 0) acc += c * f[l][j];
        }
      }
      f[i][n] = acc;
    }
  }
  return f;
}

size_t verify_solution(const MahlerSystem& sys, const Series& f) {
  if (f.size() != sys.m) throw MahlerError(ErrorKind::Input, "solution vector has the wrong length");
  size_t order = f.empty() ? 0 : f[0].order();
  for (const auto& s : f) order = std::min(order, s.order());
  Poly d(1);
  for (size_t i = 0; i < sys.m; ++i)
    for (size_t j = 0; j < sys.m; ++j) d = lcm(d, sys.A(i, j).den());
  TruncSeries ds = TruncSeries::from_poly(d, order);
  size_t first_bad = order;
  for (size_t i = 0; i < sys.m; ++i) {
    TruncSeries r = ds * f[i].truncated(order);
    for (size_t j = 0; j < sys.m; ++j) {
      const RatFunc& a = sys.A(i, j);
      if (a.is_zero()) continue;
      Poly b = a.num() * divmod(d, a.den()).quot;
      r = r - TruncSeries::from_poly(b, order) * substitute_power(f[j].truncated(order), sys.q);
    }
    for (size_t n = 0; n < first_bad; ++n)
      if (r[n] != 0) {
        first_bad = n;
        break;
      }
  }
  return first_bad;
}

RegularityCertificate certify_regular(const MahlerSystem& sys, const Rational& alpha) {
  if (alpha == 0 || cmp_abs(alpha, 1) >= 0)
    throw MahlerError(ErrorKind::AlphaOutOfRange, "alpha must satisfy 0 < |alpha| < 1");
  RegularityCertificate cert;
  cert.alpha = alpha;
  Poly d(1);
  for (size_t i = 0; i < sys.m; ++i)
    for (size_t j = 0; j < sys.m; ++j) d = lcm(d, sys.A(i, j).den());
  RatFunc da = det(sys.A);
  Poly phi = d * da.num();
  phi = phi.shift_down(phi.valuation());
  cert.bad_poly = phi;
  Rational a0 = mahler::abs(phi.coeff(0)), amax = 0;
  for (size_t i = 1; i < phi.coeffs().size(); ++i) amax = std::max(amax, mahler::abs(phi.coeffs()[i]));
  cert.tail_bound_radius = a0 / (a0 + amax);
  Rational beta = alpha;
  long k = 0;
  while (cmp_abs(beta, cert.tail_bound_radius) >= 0) {
    if (d.eval(beta) == 0) {
      cert.failing_k = k;
      cert.failure_kind = "pole";
    } else if (phi.eval(beta) == 0) {
      cert.failing_k = k;
      cert.failure_kind = "singular";
    }
    if (cert.failing_k) {
      cert.checked_upto = k;
      cert.regular = false;
      return cert;
    }
    beta = rpow(beta, sys.q);
    ++k;
  }
  cert.checked_upto = k;
  cert.regular = true;
  return cert;
}

MahlerSystem augment_with_unit(const MahlerSystem& sys) {
  MahlerSystem out;
  out.name = sys.name.empty() ? "augmented" : sys.name + "+unit";
  out.q = sys.q;
  out.m = sys.m + 1;
  out.A = RMatrix(out.m, out.m, RatFunc(0));
  out.A(0, 0) = RatFunc(1);
  for (size_t i = 0; i < sys.m; ++i)
    for (size_t j = 0; j < sys.m; ++j) out.A(i + 1, j + 1) = sys.A(i, j);
  std::optional<QVector> base = sys.f0;
  if (!base && sys.pole_free_at_origin()) {
    try {
      base = default_initial_vector(sys);
    } catch (const MahlerError&) {
    }
  }
  if (base) {
    QVector v{Rational(1)};
    v.insert(v.end(), base->begin(), base->end());
    out.f0 = v;
  }
  if (sys.coeff_bound) out.coeff_bound = CoeffBound{std::max(sys.coeff_bound->C, Rational(1)), sys.coeff_bound->rho};
  return out;
}

}  // namespace mahler
