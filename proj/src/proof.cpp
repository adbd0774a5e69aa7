#include "mahler/proof.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

#include "mahler/errors.hpp"
#include "mahler/lift.hpp"

namespace mahler {

namespace {

struct QOps {
  using T = Rational;
  T zero() const { return 0; }
  T one() const { return 1; }
  T add(const T& a, const T& b) const { return a + b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T from(const Rational& r) const { return r; }
};

// Everything a constraint row needs that does not depend on k.
struct RowSpec {
  size_t m;
  unsigned delta1;
  long p;
  QVector tau;
  std::vector<QVector> f_coeffs;  // n < p
  std::vector<std::pair<Exponents, unsigned>> complement;
  std::vector<size_t> column_order;  // unknown slot -> (j * nb + b)
};

template <class Ops>
typename Ops::T ipow_t(const Ops& ops, typename Ops::T base, unsigned e) {
  typename Ops::T r = ops.one();
  for (; e; e >>= 1, base = ops.mul(base, base))
    if (e & 1) r = ops.mul(r, base);
  return r;
}

// Row of the map (P_0..P_delta1) -> E_p(Y, w) at a point, in natural unknown
// order j * nb + b.
template <class Ops>
std::vector<typename Ops::T> constraint_row(const Ops& ops, const RowSpec& s, const std::vector<typename Ops::T>& y,
                                            const typename Ops::T& w) {
  using T = typename Ops::T;
  const size_t m = s.m, nb = s.complement.size();
  const size_t p = static_cast<size_t>(s.p);
  std::vector<T> tau, phi(p, ops.zero());
  for (const auto& t : s.tau) tau.push_back(ops.from(t));
  for (size_t n = 0; n < p; ++n) {
    T acc = ops.zero();
    for (size_t i = 0; i < m; ++i) {
      T row = ops.zero();
      for (size_t j = 0; j < m; ++j) row = ops.add(row, ops.mul(y[i * m + j], ops.from(s.f_coeffs[n][j])));
      acc = ops.add(acc, ops.mul(tau[i], row));
    }
    phi[n] = acc;
  }
  std::vector<std::vector<T>> powers(s.delta1 + 1, std::vector<T>(p, ops.zero()));
  powers[0][0] = ops.one();
  for (unsigned j = 1; j <= s.delta1; ++j)
    for (size_t a = 0; a < p; ++a)
      for (size_t b = 0; a + b < p; ++b) powers[j][a + b] = ops.add(powers[j][a + b], ops.mul(powers[j - 1][a], phi[b]));
  std::vector<T> wp(p, ops.one());
  for (size_t l = 1; l < p; ++l) wp[l] = ops.mul(wp[l - 1], w);

  std::vector<T> row((s.delta1 + 1) * nb, ops.zero());
  for (size_t b = 0; b < nb; ++b) {
    const auto& [nu, mu] = s.complement[b];
    if (mu >= p) continue;
    T mono = ops.one();
    for (size_t e = 0; e < nu.size(); ++e)
      if (nu[e]) mono = ops.mul(mono, ipow_t(ops, y[e], nu[e]));
    for (unsigned j = 0; j <= s.delta1; ++j) {
      T acc = ops.zero();
      for (size_t l = mu; l < p; ++l) acc = ops.add(acc, ops.mul(powers[j][l - mu], wp[l]));
      row[j * nb + b] = ops.mul(mono, acc);
    }
  }
  return row;
}

template <class Ops>
std::vector<typename Ops::T> permuted(const std::vector<typename Ops::T>& row, const std::vector<size_t>& order) {
  std::vector<typename Ops::T> out(order.size());
  for (size_t c = 0; c < order.size(); ++c) out[c] = row[order[c]];
  return out;
}

std::vector<Rational> flat(const QMatrix& a) {
  std::vector<Rational> v;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) v.push_back(a(i, j));
  return v;
}

size_t bits_of(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

}  // namespace

Rational eval_Pj(const AuxFunction& aux, size_t j, const QMatrix& y, const Rational& w) {
  Rational acc = 0;
  for (size_t b = 0; b < aux.complement.size(); ++b) {
    const Rational& c = aux.P[j][b];
    if (c == 0) continue;
    acc += c * monomial_value(y, aux.complement[b].first) * rpow(w, aux.complement[b].second);
  }
  return acc;
}

Rational eval_Ep(const AuxFunction& aux, const QMatrix& y, const Rational& w) {
  RowSpec s{aux.m, aux.delta1, aux.p, aux.tau, aux.f_coeffs, aux.complement, {}};
  std::vector<Rational> row = constraint_row(QOps{}, s, flat(y), w);
  Rational acc = 0;
  const size_t nb = aux.complement.size();
  for (unsigned j = 0; j <= aux.delta1; ++j)
    for (size_t b = 0; b < nb; ++b)
      if (aux.P[j][b] != 0) acc += aux.P[j][b] * row[j * nb + b];
  return acc;
}

AuxFunction build_aux(const MahlerSystem& sys, const std::vector<TruncSeries>& f, const Rational& alpha,
                      const QVector& tau, unsigned delta1, unsigned delta2, const std::vector<unsigned>& kset,
                      const AuxOptions& opt) {
  if (tau.size() != sys.m) throw MahlerError(ErrorKind::Input, "tau must have m entries");
  if (kset.empty()) throw MahlerError(ErrorKind::Input, "kset must not be empty");
  AuxFunction aux;
  aux.m = sys.m;
  aux.q = sys.q;
  aux.delta1 = delta1;
  aux.delta2 = delta2;
  aux.tau = tau;
  aux.alpha = alpha;
  aux.p = std::max<long>(1, static_cast<long>(delta1) * delta2 / 4);
  Integer pp = Integer(static_cast<unsigned long>(delta1) * delta2) / ipow(2, sys.m * sys.m + 2);
  aux.p_strict = pp.get_si();
  for (const auto& s : f)
    if (s.order() < static_cast<size_t>(aux.p))
      throw MahlerError(ErrorKind::InsufficientOrder, "series order below p", aux.p);
  for (long n = 0; n < aux.p; ++n) {
    QVector c;
    for (const auto& s : f) c.push_back(s[n]);
    aux.f_coeffs.push_back(c);
  }

  KernelBasis kb = kernel_basis(sys, alpha, delta1, delta2, opt.kernel);
  aux.complement = kb.pivot_monomials();
  const size_t nb = aux.complement.size();
  aux.unknowns = (delta1 + 1) * nb;

  // Unknowns whose monomial has z-degree >= p never reach E_p; they go last.
  RowSpec spec{aux.m, delta1, aux.p, tau, aux.f_coeffs, aux.complement, {}};
  for (int pass = 0; pass < 2; ++pass)
    for (unsigned j = 0; j <= delta1; ++j)
      for (size_t b = 0; b < nb; ++b)
        if ((aux.complement[b].second >= static_cast<unsigned>(aux.p)) == (pass == 1))
          spec.column_order.push_back(j * nb + b);

  auto assign_P = [&](AuxFunction& a, const QVector& v) {
    a.P.assign(delta1 + 1, QVector(nb));
    for (size_t c = 0; c < a.unknowns; ++c) {
      size_t natural = spec.column_order[c];
      a.P[natural / nb][natural % nb] = v[c];
    }
  };

  std::vector<unsigned> ks = kset;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  // Exact constraint rows.  A kernel vector is accepted once it also kills
  // the next `heldout` values of k; otherwise the failing k joins the
  // constraints and the kernel is recomputed.
  CocycleChain chain(sys, alpha);
  auto exact_row = [&](unsigned k) {
    const Rational& w = chain.w(k);
    size_t est = bits_of(w) * (aux.delta2 + static_cast<size_t>(aux.p) + 1);
    if (est > opt.exact_bits)
      throw MahlerError(ErrorKind::RankNotStabilized, "constraint rows exceed the exact size budget", k);
    return permuted<QOps>(constraint_row(QOps{}, spec, flat(chain.A(k)), w), spec.column_order);
  };
  std::map<unsigned, std::vector<Rational>> rows;
  auto row_at = [&](unsigned k) -> const std::vector<Rational>& {
    auto it = rows.find(k);
    if (it == rows.end()) it = rows.emplace(k, exact_row(k)).first;
    return it->second;
  };
  auto dot = [](const std::vector<Rational>& r, const QVector& v) {
    Rational acc = 0;
    for (size_t i = 0; i < r.size(); ++i)
      if (v[i] != 0) acc += r[i] * v[i];
    return acc;
  };

  QVector sol;
  while (sol.empty()) {
    if (ks.back() > opt.max_k)
      throw MahlerError(ErrorKind::RankNotStabilized, "held-out checks kept failing up to max_k", opt.max_k);
    QMatrix cm(ks.size(), aux.unknowns);
    for (size_t i = 0; i < ks.size(); ++i) {
      const auto& r = row_at(ks[i]);
      for (size_t c = 0; c < aux.unknowns; ++c) cm(i, c) = r[c];
    }
    std::vector<QVector> kern = nullspace(cm);
    if (kern.empty()) throw MahlerError(ErrorKind::EmptyKernel, "constraint map is injective");
    aux.constraint_rank = aux.unknowns - kern.size();
    std::vector<unsigned> held;
    for (unsigned h = 1; h <= opt.heldout; ++h) held.push_back(ks.back() + h);
    // Among kernel vectors that pass the held-out k, prefer one whose E_p is
    // not identically zero, then the smallest v0.
    std::optional<unsigned> first_fail;
    std::tuple<bool, size_t> best{true, SIZE_MAX};
    for (const auto& v : kern) {
      bool pass = true;
      for (unsigned k : held)
        if (dot(row_at(k), v) != 0) {
          pass = false;
          if (!first_fail || k < *first_fail) first_fail = k;
          break;
        }
      if (!pass) continue;
      AuxFunction trial = aux;
      assign_P(trial, v);
      bool trivial = yz_E(trial, static_cast<unsigned>(aux.p)).empty();
      size_t v0 = SIZE_MAX;
      for (size_t c = 0; c < aux.unknowns; ++c)
        if (v[c] != 0) v0 = std::min(v0, spec.column_order[c] / nb);
      std::tuple<bool, size_t> key{trivial, v0};
      if (sol.empty() || key < best) {
        sol = v;
        best = key;
      }
    }
    if (!sol.empty()) {
      aux.kset_heldout = held;
      aux.truncation_trivial = std::get<0>(best);
    }
    if (sol.empty()) ks.push_back(*first_fail);
    std::sort(ks.begin(), ks.end());
  }
  aux.kset_constraints = ks;
  aux.exact_verified = ks;
  aux.exact_verified.insert(aux.exact_verified.end(), aux.kset_heldout.begin(), aux.kset_heldout.end());

  assign_P(aux, sol);
  aux.v0 = -1;
  for (unsigned j = 0; j <= delta1 && aux.v0 < 0; ++j)
    if (!is_zero(aux.P[j])) aux.v0 = j;
  if (aux.v0 < 0) throw MahlerError(ErrorKind::EmptyKernel, "kernel vector is zero");
  return aux;
}

YZPoly yz_add(const YZPoly& a, const YZPoly& b) {
  YZPoly out = a;
  for (const auto& [e, c] : b) {
    Rational& s = out[e];
    s += c;
    if (s == 0) out.erase(e);
  }
  return out;
}

YZPoly yz_mul(const YZPoly& a, const YZPoly& b, unsigned z_order) {
  YZPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      if (ea.back() + eb.back() >= z_order) continue;
      std::vector<unsigned> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

YZPoly yz_F(const AuxFunction& aux, unsigned order) {
  if (order > aux.f_coeffs.size()) throw MahlerError(ErrorKind::InsufficientOrder, "stored series too short");
  const size_t m = aux.m;
  YZPoly out;
  for (unsigned n = 0; n < order; ++n)
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        Rational c = aux.tau[i] * aux.f_coeffs[n][j];
        if (c == 0) continue;
        std::vector<unsigned> e(m * m + 1, 0);
        e[i * m + j] = 1;
        e[m * m] = n;
        out[e] += c;
      }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

YZPoly yz_P(const AuxFunction& aux, size_t j) {
  YZPoly out;
  for (size_t b = 0; b < aux.complement.size(); ++b) {
    if (aux.P[j][b] == 0) continue;
    std::vector<unsigned> e = aux.complement[b].first;
    e.push_back(aux.complement[b].second);
    out[e] = aux.P[j][b];
  }
  return out;
}

YZPoly yz_E(const AuxFunction& aux, unsigned order) {
  YZPoly F = yz_F(aux, order), acc;
  std::vector<unsigned> zero(aux.m * aux.m + 1, 0);
  YZPoly Fj{{zero, Rational(1)}};
  for (unsigned j = 0; j <= aux.delta1; ++j) {
    acc = yz_add(acc, yz_mul(yz_P(aux, j), Fj, order));
    Fj = yz_mul(Fj, F, order);
  }
  return acc;
}

YZPoly yz_E_factored(const AuxFunction& aux, unsigned order) {
  YZPoly F = yz_F(aux, order), frak;
  std::vector<unsigned> zero(aux.m * aux.m + 1, 0);
  YZPoly Fj{{zero, Rational(1)}};
  for (unsigned j = static_cast<unsigned>(aux.v0); j <= aux.delta1; ++j) {
    frak = yz_add(frak, yz_mul(yz_P(aux, j), Fj, order));
    Fj = yz_mul(Fj, F, order);
  }
  YZPoly Fv{{zero, Rational(1)}};
  for (long j = 0; j < aux.v0; ++j) Fv = yz_mul(Fv, F, order);
  return yz_mul(frak, Fv, order);
}

DecayReport decay_report(const AuxFunction& aux, const MahlerSystem& sys, const Rational& alpha, unsigned kmax,
                         size_t relation_order) {
  std::vector<TruncSeries> f = solve_series(sys, relation_order + 1);
  ValueCheck vc = verify_value_relation(sys, f, {aux.tau, alpha}, relation_order);
  DecayReport rep;
  rep.relation_status = status_name(vc.status);
  if (vc.status != ValueStatus::Verified)
    throw MahlerError(ErrorKind::PreconditionTauNotARelation, "tau is not a verified value relation at alpha");

  unsigned k0 = aux.kset_constraints.empty() ? 1 : aux.kset_constraints.front();
  CocycleChain chain(sys, alpha);
  double sxy = 0, sxx = 0;
  for (unsigned k = k0; k <= kmax; ++k) {
    const QMatrix& a = chain.A(k);
    const Rational& w = chain.w(k);
    DecayRow row;
    row.k = k;
    row.value = eval_Pj(aux, static_cast<size_t>(aux.v0), a, w);

    // F(A_k(alpha), w) as G_k(w) with G_k(z) = tau A_k(alpha) f(z) when G_k
    // is visibly a polynomial, else zero through the verified relation.
    std::vector<Rational> g(f[0].order());
    long last = -1;
    for (size_t n = 0; n < g.size(); ++n) {
      for (size_t i = 0; i < sys.m; ++i)
        for (size_t j = 0; j < sys.m; ++j) g[n] += aux.tau[i] * a(i, j) * f[j][n];
      if (g[n] != 0) last = static_cast<long>(n);
    }
    Rational Fval = 0;
    if (last < static_cast<long>(g.size()) / 2) {
      g.resize(last + 1);
      Fval = Poly(g).eval(w);
      row.f_source = "polynomial";
    } else {
      row.f_source = "relation";
    }
    Rational acc = 0, Fp = 1;
    for (unsigned j = static_cast<unsigned>(aux.v0); j <= aux.delta1; ++j) {
      acc += eval_Pj(aux, j, a, w) * Fp;
      Fp *= Fval;
    }
    row.frak_value = acc;
    if (row.frak_value != row.value) rep.values_agree = false;
    row.zero = row.value == 0;
    if (!row.zero) {
      row.log_abs = log_abs(row.value);
      row.height = weil_height(row.value);
      row.liouville_floor = row.height.scaled(-1);
      row.liouville_ok = liouville_holds_exact(row.value);
      if (!row.liouville_ok) rep.liouville_ok = false;
      double qk = std::pow(static_cast<double>(sys.q), k);
      rep.c3_hat = std::max(rep.c3_hat, row.height.value / (qk * aux.delta2));
      double x = qk * aux.delta1 * aux.delta2, y = -row.log_abs.value;
      sxy += x * y;
      sxx += x * x;
    }
    rep.rows.push_back(row);
  }
  rep.c2_hat = sxx > 0 ? sxy / sxx : 0;
  return rep;
}

HeightGrowth height_growth(const MahlerSystem& sys, const Rational& alpha, unsigned kmax) {
  HeightGrowth hg;
  CocycleChain chain(sys, alpha);
  std::vector<double> running;
  for (unsigned k = 0; k <= kmax; ++k) {
    HeightRow row;
    row.k = k;
    const QMatrix& a = chain.A(k);
    double qk = std::pow(static_cast<double>(sys.q), k);
    for (size_t i = 0; i < a.rows(); ++i)
      for (size_t j = 0; j < a.cols(); ++j) {
        LogValue h = weil_height(a(i, j));
        row.heights.push_back(h);
        row.max_ratio = std::max(row.max_ratio, h.value / qk);
      }
    hg.gamma_hat = std::max(hg.gamma_hat, row.max_ratio);
    running.push_back(hg.gamma_hat);
    hg.rows.push_back(std::move(row));
  }
  for (const auto& row : hg.rows) {
    double qk = std::pow(static_cast<double>(sys.q), row.k);
    for (const auto& h : row.heights)
      if (h.value > hg.gamma_hat * qk) hg.bounded = false;
  }
  unsigned half = (kmax + 1) / 2;
  double tol = 2 * hg.gamma_hat / std::pow(static_cast<double>(sys.q), half);
  hg.stable = kmax >= 2 && running[kmax] - running[half] <= tol;
  return hg;
}

}  // namespace mahler
