#include "mahler/relation_ideal.hpp"

#include <algorithm>
#include <numeric>

#include "mahler/errors.hpp"
#include "mahler/parallel.hpp"

namespace mahler {

bool graded_less(const Exponents& a, const Exponents& b) {
  unsigned sa = std::accumulate(a.begin(), a.end(), 0u), sb = std::accumulate(b.begin(), b.end(), 0u);
  if (sa != sb) return sa < sb;
  return a > b;
}

namespace {

// All exponent vectors of length n with entries <= d, in graded order.
std::vector<Exponents> graded_exponents(size_t n, unsigned d, size_t cap, const char* what) {
  Integer count = ipow(Integer(d + 1), n);
  if (count > Integer(static_cast<unsigned long>(cap)))
    throw MahlerError(ErrorKind::SizeBudgetExceeded, std::string(what) + " has " + count.get_str() + " exponents");
  std::vector<Exponents> out;
  out.reserve(count.get_ui());
  Exponents e(n, 0);
  while (true) {
    out.push_back(e);
    size_t i = 0;
    while (i < n && e[i] == d) e[i++] = 0;
    if (i == n) break;
    ++e[i];
  }
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

Rational pow_entry(const Rational& base, unsigned e) { return rpow(base, e); }

size_t bits_of(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

void check_regular(const MahlerSystem& sys, const Rational& alpha) {
  RegularityCertificate cert = certify_regular(sys, alpha);
  if (!cert.regular)
    throw MahlerError(ErrorKind::NotRegularAt, "system is not regular at alpha^(q^k)", cert.failing_k.value_or(-1));
}

// Column layout after factoring out constant entries of A_k(alpha).
struct Layout {
  size_t m = 1;
  unsigned delta1 = 0, delta2 = 0;
  std::vector<size_t> const_entries, var_entries;
  std::vector<Rational> const_values;
  std::vector<Exponents> reduced_nus;
  size_t cols() const { return reduced_nus.size() * (delta2 + 1); }
};

// Per-prime data: the modular chain over the whole candidate range.
struct PrimeRows {
  ModP f;
  std::vector<std::vector<u64>> a;  // A_k mod p, indexed by k - k_min
  std::vector<u64> w;
};

PrimeRows chain_mod(const MahlerSystem& sys, const Rational& alpha, u64 p, unsigned k_min, unsigned k_max) {
  PrimeRows pr{ModP{p}, {}, {}};
  ModCocycleChain chain(sys, alpha, pr.f);
  for (unsigned k = k_min; k <= k_max; ++k) {
    pr.a.push_back(chain.A(k));
    pr.w.push_back(chain.w(k));
  }
  return pr;
}

std::vector<u64> mod_row(const Layout& L, const PrimeRows& pr, unsigned idx) {
  const ModP& f = pr.f;
  const auto& a = pr.a[idx];
  size_t nt = L.var_entries.size();
  std::vector<std::vector<u64>> pw(nt, std::vector<u64>(L.delta1 + 1, 1));
  for (size_t t = 0; t < nt; ++t)
    for (unsigned e = 1; e <= L.delta1; ++e) pw[t][e] = f.mul(pw[t][e - 1], a[L.var_entries[t]]);
  std::vector<u64> wp(L.delta2 + 1, 1);
  for (unsigned l = 1; l <= L.delta2; ++l) wp[l] = f.mul(wp[l - 1], pr.w[idx]);
  std::vector<u64> row(L.cols());
  for (size_t n = 0; n < L.reduced_nus.size(); ++n) {
    u64 v = 1;
    for (size_t t = 0; t < nt; ++t) v = f.mul(v, pw[t][L.reduced_nus[n][t]]);
    for (unsigned l = 0; l <= L.delta2; ++l) row[n * (L.delta2 + 1) + l] = f.mul(v, wp[l]);
  }
  return row;
}

std::vector<Rational> exact_row(const Layout& L, const QMatrix& a, const Rational& w) {
  size_t nt = L.var_entries.size();
  std::vector<std::vector<Rational>> pw(nt, std::vector<Rational>(L.delta1 + 1, Rational(1)));
  for (size_t t = 0; t < nt; ++t)
    for (unsigned e = 1; e <= L.delta1; ++e)
      pw[t][e] = pw[t][e - 1] * a(L.var_entries[t] / L.m, L.var_entries[t] % L.m);
  std::vector<Rational> wp(L.delta2 + 1, Rational(1));
  for (unsigned l = 1; l <= L.delta2; ++l) wp[l] = wp[l - 1] * w;
  std::vector<Rational> row(L.cols());
  for (size_t n = 0; n < L.reduced_nus.size(); ++n) {
    Rational v = 1;
    for (size_t t = 0; t < nt; ++t) v *= pw[t][L.reduced_nus[n][t]];
    for (unsigned l = 0; l <= L.delta2; ++l) row[n * (L.delta2 + 1) + l] = v * wp[l];
  }
  return row;
}

// Usable primes together with their chains; primes with a pole mod p are skipped.
std::vector<PrimeRows> prime_chains(const MahlerSystem& sys, const Rational& alpha, size_t want, unsigned k_min,
                                    unsigned k_max, size_t skip = 0) {
  std::vector<PrimeRows> out;
  size_t idx = skip;
  while (out.size() < want) {
    if (idx >= skip + want + 16) throw MahlerError(ErrorKind::BadPrime, "no usable prime found");
    u64 p = big_primes(idx + 1)[idx];
    ++idx;
    try {
      out.push_back(chain_mod(sys, alpha, p, k_min, k_max));
    } catch (const MahlerError& e) {
      if (e.kind() != ErrorKind::BadPrime) throw;
    }
  }
  return out;
}

Layout make_layout(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                   unsigned k_min, const std::vector<PrimeRows>& prs, size_t reduced_cap) {
  Layout L;
  L.m = sys.m;
  L.delta1 = delta1;
  L.delta2 = delta2;
  QMatrix a0 = eval_cocycle(sys, alpha, k_min);
  for (size_t e = 0; e < sys.m * sys.m; ++e) {
    bool constant = true;
    for (const auto& pr : prs) {
      u64 c0 = pr.f.from(a0(e / sys.m, e % sys.m));
      for (const auto& a : pr.a)
        if (a[e] != c0) { constant = false; break; }
      if (!constant) break;
    }
    if (constant) {
      L.const_entries.push_back(e);
      L.const_values.push_back(a0(e / sys.m, e % sys.m));
    } else {
      L.var_entries.push_back(e);
    }
  }
  size_t cap = std::max<size_t>(1, reduced_cap / (delta2 + 1));
  L.reduced_nus = graded_exponents(L.var_entries.size(), delta1, cap, "reduced monomial set");
  return L;
}

// Growth schedule for the number of constraint rows.
size_t next_size(size_t n) { return n + std::max<size_t>(4, (n + 1) / 2); }

struct StabilizeResult {
  bool ok = false;
  size_t rows = 0;       // rows k_min .. k_min + rows - 1 are used
  size_t heldout = 0;    // the following rows are held out
  size_t rank = 0;
};

StabilizeResult stabilize(const Layout& L, const PrimeRows& pr, unsigned heldout) {
  StabilizeResult res;
  size_t total = pr.a.size();
  ModEchelon ech(pr.f, L.cols());
  std::vector<size_t> ranks;
  size_t used = 0, target = 4;
  while (true) {
    if (target + heldout > total) return res;
    for (; used < target; ++used) ech.add_row(mod_row(L, pr, static_cast<unsigned>(used)));
    ranks.push_back(ech.rank());
    size_t r = ranks.size();
    if (r >= 3 && ranks[r - 1] == ranks[r - 2] && ranks[r - 2] == ranks[r - 3]) {
      bool held = true;
      for (size_t h = 0; h < heldout && held; ++h)
        held = ech.reduces_to_zero(mod_row(L, pr, static_cast<unsigned>(used + h)));
      if (held) {
        res.ok = true;
        res.rows = used;
        res.heldout = heldout;
        res.rank = ech.rank();
        return res;
      }
    }
    target = next_size(target);
  }
}

ModEchelon echelon_rows(const Layout& L, const PrimeRows& pr, size_t rows) {
  ModEchelon ech(pr.f, L.cols());
  for (size_t i = 0; i < rows; ++i) ech.add_row(mod_row(L, pr, static_cast<unsigned>(i)));
  return ech;
}

Integer full_monomial_count(size_t m, unsigned delta1, unsigned delta2) {
  return ipow(Integer(delta1 + 1), m * m) * Integer(delta2 + 1);
}

}  // namespace

size_t MonomialBasis::index_of(const Exponents& nu) const {
  auto it = std::lower_bound(nus.begin(), nus.end(), nu, graded_less);
  if (it == nus.end() || *it != nu) throw MahlerError(ErrorKind::Input, "exponent matrix outside the monomial box");
  return static_cast<size_t>(it - nus.begin());
}

std::string MonomialBasis::label(size_t col) const {
  const Exponents& nu = nu_of(col);
  std::string s;
  for (size_t e = 0; e < nu.size(); ++e) {
    if (nu[e] == 0) continue;
    if (!s.empty()) s += "*";
    s += "y" + std::to_string(e / m + 1) + std::to_string(e % m + 1);
    if (nu[e] > 1) s += "^" + std::to_string(nu[e]);
  }
  unsigned l = lambda_of(col);
  if (l > 0) {
    if (!s.empty()) s += "*";
    s += "z";
    if (l > 1) s += "^" + std::to_string(l);
  }
  return s.empty() ? "1" : s;
}

MonomialBasis monomial_basis(size_t m, unsigned delta1, unsigned delta2, size_t cap) {
  MonomialBasis b;
  b.m = m;
  b.delta1 = delta1;
  b.delta2 = delta2;
  b.nus = graded_exponents(m * m, delta1, std::max<size_t>(1, cap / (delta2 + 1)), "monomial basis");
  return b;
}

Rational monomial_value(const QMatrix& y, const Exponents& nu) {
  Rational v = 1;
  size_t m = y.rows();
  for (size_t e = 0; e < nu.size(); ++e)
    if (nu[e]) v *= pow_entry(y(e / m, e % m), nu[e]);
  return v;
}

QMatrix eval_matrix(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                    const std::vector<unsigned>& kset) {
  MonomialBasis b = monomial_basis(sys.m, delta1, delta2);
  CocycleChain chain(sys, alpha);
  std::vector<QMatrix> as;
  std::vector<Rational> ws;
  for (unsigned k : kset) {
    as.push_back(chain.A(k));
    ws.push_back(chain.w(k));
  }
  QMatrix out(kset.size(), b.size());
  parallel_for(kset.size(), [&](size_t r) {
    std::vector<Rational> wp(delta2 + 1, Rational(1));
    for (unsigned l = 1; l <= delta2; ++l) wp[l] = wp[l - 1] * ws[r];
    for (size_t n = 0; n < b.nus.size(); ++n) {
      Rational v = monomial_value(as[r], b.nus[n]);
      for (unsigned l = 0; l <= delta2; ++l) out(r, b.column(n, l)) = v * wp[l];
    }
  });
  return out;
}

Rational evaluate(const MonomialBasis& basis, const SparseVec& p, const QMatrix& y, const Rational& w) {
  Rational acc = 0;
  for (const auto& [col, c] : p) {
    if (col >= basis.size()) throw MahlerError(ErrorKind::Input, "coefficient index outside the monomial box");
    if (c == 0) continue;
    acc += c * monomial_value(y, basis.nu_of(col)) * rpow(w, basis.lambda_of(col));
  }
  return acc;
}

Exponents KernelBasis::embed(size_t reduced_nu_index) const {
  Exponents nu(m * m, 0);
  for (size_t t = 0; t < var_entries.size(); ++t) nu[var_entries[t]] = reduced_nus[reduced_nu_index][t];
  return nu;
}

std::vector<std::pair<Exponents, unsigned>> KernelBasis::pivot_monomials() const {
  std::vector<std::pair<Exponents, unsigned>> out;
  for (size_t c : reduced_pivots) out.emplace_back(embed(c / (delta2 + 1)), static_cast<unsigned>(c % (delta2 + 1)));
  return out;
}

std::vector<SparseVec> KernelBasis::vectors() const {
  if (basis.nus.empty()) throw MahlerError(ErrorKind::SizeBudgetExceeded, "monomial basis was not enumerated");
  std::map<Exponents, size_t> reduced_index;
  for (size_t n = 0; n < reduced_nus.size(); ++n) reduced_index[reduced_nus[n]] = n;
  std::map<size_t, size_t> pivot_row;
  std::vector<size_t> pivot_full;
  for (size_t i = 0; i < reduced_pivots.size(); ++i) {
    pivot_row[reduced_pivots[i]] = i;
    size_t c = reduced_pivots[i];
    pivot_full.push_back(basis.column(basis.index_of(embed(c / (delta2 + 1))), c % (delta2 + 1)));
  }
  std::vector<SparseVec> out;
  for (size_t j = 0; j < basis.size(); ++j) {
    const Exponents& nu = basis.nu_of(j);
    Exponents nt(var_entries.size());
    for (size_t t = 0; t < var_entries.size(); ++t) nt[t] = nu[var_entries[t]];
    Rational scale = 1;
    bool on_reduced = true;
    for (size_t s = 0; s < const_entries.size(); ++s) {
      unsigned e = nu[const_entries[s]];
      if (e) {
        on_reduced = false;
        scale *= rpow(const_values[s], e);
      }
    }
    size_t rc = reduced_index.at(nt) * (delta2 + 1) + basis.lambda_of(j);
    if (on_reduced && pivot_row.count(rc)) continue;
    SparseVec v;
    v[j] = 1;
    if (scale != 0)
      for (size_t i = 0; i < reduced_pivots.size(); ++i) {
        Rational c = -scale * reduced_rref(i, rc);
        if (c != 0) v[pivot_full[i]] = c;
      }
    out.push_back(std::move(v));
  }
  return out;
}

KernelBasis kernel_basis(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                         const KernelOptions& opt) {
  check_regular(sys, alpha);
  const unsigned k_max = opt.max_k + opt.heldout;
  const size_t want = std::max<size_t>(2, opt.primes) + 1;  // the extra prime checks the reconstruction
  std::vector<PrimeRows> prs = prime_chains(sys, alpha, want, opt.k_min, k_max);
  Layout L = make_layout(sys, alpha, delta1, delta2, opt.k_min, prs, opt.reduced_cap);

  StabilizeResult st = stabilize(L, prs[0], opt.heldout);
  if (!st.ok)
    throw MahlerError(ErrorKind::StabilizationFailed, "kernel did not stabilize below max_k", opt.max_k);

  // Echelon forms on the same rows for every prime.  Primes matching the
  // maximal rank and pivot set are CRT-combined, except the last one, which
  // checks the reconstruction.  More primes are drawn when that check fails.
  std::vector<ModEchelon> echs;
  size_t best = 0;
  std::vector<size_t> good, piv;
  QMatrix rref;
  bool done = false;
  for (size_t n = want; n <= want + 5 && !done; ++n) {
    if (prs.size() < n) {
      auto more = prime_chains(sys, alpha, n - prs.size(), opt.k_min, k_max, prs.size() + 16 * (n - want));
      for (auto& pr : more) prs.push_back(std::move(pr));
    }
    size_t have = echs.size();
    for (size_t i = have; i < prs.size(); ++i) echs.emplace_back(prs[i].f, 0);
    parallel_for(prs.size() - have, [&](size_t i) { echs[have + i] = echelon_rows(L, prs[have + i], st.rows); });
    best = 0;
    for (const auto& e : echs) best = std::max(best, e.rank());
    good.clear();
    for (size_t i = 0; i < echs.size(); ++i) {
      if (echs[i].rank() != best) continue;
      if (good.empty()) piv = echs[i].pivots();
      if (echs[i].pivots() == piv) good.push_back(i);
    }
    if (good.size() < 3) continue;
    std::vector<std::vector<std::vector<u64>>> rows_by_prime;
    std::vector<u64> ps;
    for (size_t g : good) {
      rows_by_prime.push_back(echs[g].sorted_rows());
      ps.push_back(prs[g].f.p);
    }
    auto rec = reconstruct_rref(rows_by_prime, ps);
    if (!rec) continue;
    rref = QMatrix(best, L.cols());
    for (size_t i = 0; i < best; ++i)
      for (size_t j = 0; j < L.cols(); ++j) rref(i, j) = (*rec)[i][j];
    done = true;
  }
  if (!done) throw MahlerError(ErrorKind::RankNotStabilized, "rational reconstruction of the echelon form failed");

  KernelBasis kb;
  kb.m = sys.m;
  kb.delta1 = delta1;
  kb.delta2 = delta2;
  kb.const_entries = L.const_entries;
  kb.var_entries = L.var_entries;
  kb.const_values = L.const_values;
  kb.reduced_nus = L.reduced_nus;
  kb.reduced_pivots = piv;
  kb.rank = best;
  kb.full_size = full_monomial_count(sys.m, delta1, delta2);
  kb.kernel_dim = kb.full_size - Integer(static_cast<unsigned long>(best));
  for (size_t i = 0; i < st.rows; ++i) kb.k_used.push_back(opt.k_min + static_cast<unsigned>(i));
  for (size_t h = 0; h < st.heldout; ++h) kb.held_out_verified.push_back(opt.k_min + static_cast<unsigned>(st.rows + h));
  kb.stabilized = true;
  kb.reduced_rref = std::move(rref);
  for (size_t g : good) kb.primes.push_back(prs[g].f.p);
  const size_t cols = L.cols();

  // Exact re-verification while the values stay small.
  CocycleChain chain(sys, alpha);
  std::vector<unsigned> ks = kb.k_used;
  ks.insert(ks.end(), kb.held_out_verified.begin(), kb.held_out_verified.end());
  for (unsigned k : ks) {
    const QMatrix& a = chain.A(k);
    const Rational& w = chain.w(k);
    size_t est = delta2 * bits_of(w);
    for (size_t e : L.var_entries) est += delta1 * bits_of(a(e / sys.m, e % sys.m));
    if (est > opt.exact_bits) break;
    for (size_t s = 0; s < L.const_entries.size(); ++s)
      if (a(L.const_entries[s] / sys.m, L.const_entries[s] % sys.m) != L.const_values[s])
        throw MahlerError(ErrorKind::RankNotStabilized, "an entry assumed constant varies", k);
    std::vector<Rational> row = exact_row(L, a, w);
    for (size_t j = 0; j < cols; ++j) {
      Rational r = row[j];
      for (size_t i = 0; i < best; ++i)
        if (kb.reduced_rref(i, j) != 0) r -= row[piv[i]] * kb.reduced_rref(i, j);
      if (r != 0) throw MahlerError(ErrorKind::RankNotStabilized, "kernel vector fails exact verification", k);
    }
    kb.exact_verified.push_back(k);
  }

  Integer full = kb.full_size;
  if (full <= Integer(static_cast<unsigned long>(kDefaultMonomialCap))) kb.basis = monomial_basis(sys.m, delta1, delta2);
  else {
    kb.basis.m = sys.m;
    kb.basis.delta1 = delta1;
    kb.basis.delta2 = delta2;
  }
  return kb;
}

RankResult stabilized_rank(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                           const KernelOptions& opt) {
  check_regular(sys, alpha);
  const unsigned k_max = opt.max_k + opt.heldout;
  std::vector<PrimeRows> prs = prime_chains(sys, alpha, 2, opt.k_min, k_max);
  Layout L = make_layout(sys, alpha, delta1, delta2, opt.k_min, prs, opt.reduced_cap);
  StabilizeResult st = stabilize(L, prs[0], opt.heldout);
  if (!st.ok)
    throw MahlerError(ErrorKind::StabilizationFailed, "rank did not stabilize below max_k", opt.max_k);
  ModEchelon second = echelon_rows(L, prs[1], st.rows);
  RankResult r;
  r.rank = std::max(st.rank, second.rank());
  r.primes_agree = st.rank == second.rank();
  r.rows_used = st.rows;
  r.k_max = opt.k_min + static_cast<unsigned>(st.rows + st.heldout) - 1;
  return r;
}

std::vector<QVector> kernel_of_kset(const MahlerSystem& sys, const Rational& alpha, unsigned delta1,
                                   unsigned delta2, const std::vector<unsigned>& kset) {
  return nullspace(eval_matrix(sys, alpha, delta1, delta2, kset));
}

bool is_member(const MonomialBasis& basis, const SparseVec& p, const MahlerSystem& sys, const Rational& alpha,
               const std::vector<unsigned>& kset) {
  bool zero = std::all_of(p.begin(), p.end(), [](const auto& e) { return e.second == 0; });
  if (zero) return true;
  CocycleChain chain(sys, alpha);
  for (unsigned k : kset)
    if (evaluate(basis, p, chain.A(k), chain.w(k)) != 0) return false;
  return true;
}

DimProfile dim_profile(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned d2_from,
                       unsigned d2_to, const KernelOptions& opt) {
  if (d2_from > d2_to) throw MahlerError(ErrorKind::Input, "delta2 range must be ascending");
  DimProfile prof;
  prof.delta1 = delta1;
  std::vector<size_t> ranks(d2_to - d2_from + 1);
  parallel_for(ranks.size(), [&](size_t i) {
    ranks[i] = stabilized_rank(sys, alpha, delta1, d2_from + static_cast<unsigned>(i), opt).rank;
  });
  prof.increments_positive = true;
  for (size_t i = 0; i < ranks.size(); ++i) {
    long inc = i == 0 ? -1 : static_cast<long>(ranks[i]) - static_cast<long>(ranks[i - 1]);
    prof.rows.push_back({d2_from + static_cast<unsigned>(i), ranks[i], inc});
    if (i > 0 && inc < 1) prof.increments_positive = false;
  }
  size_t n = prof.rows.size();
  prof.c1_estimate = n >= 2 ? prof.rows.back().increment : -1;
  prof.increments_stable = n >= 3 && prof.rows[n - 1].increment == prof.rows[n - 2].increment;
  return prof;
}

DoublingReport doubling_check(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                              const KernelOptions& opt) {
  DoublingReport r;
  r.delta1 = delta1;
  r.delta2 = delta2;
  r.rank_single = stabilized_rank(sys, alpha, delta1, delta2, opt).rank;
  r.rank_double = stabilized_rank(sys, alpha, 2 * delta1, delta2, opt).rank;
  r.factor = ipow(2, sys.m * sys.m);
  r.pass = Integer(static_cast<unsigned long>(r.rank_double)) <= r.factor * Integer(static_cast<unsigned long>(r.rank_single));
  return r;
}

bool shift_check(const MonomialBasis& basis, const SparseVec& p, const MahlerSystem& sys, const Rational& alpha,
                 unsigned k, const std::vector<unsigned>& ells) {
  CocycleChain chain(sys, alpha);
  for (unsigned l : ells) {
    QMatrix y = chain.A(l) * eval_cocycle(sys, chain.w(l), k);
    if (evaluate(basis, p, y, chain.w(k + l)) != 0) return false;
  }
  return true;
}

SparseVec box_square(const MonomialBasis& basis, const SparseVec& p) {
  SparseVec out;
  for (const auto& [c1, v1] : p)
    for (const auto& [c2, v2] : p) {
      const Exponents& a = basis.nu_of(c1);
      const Exponents& b = basis.nu_of(c2);
      Exponents s(a.size());
      bool inside = true;
      for (size_t e = 0; e < a.size(); ++e) {
        s[e] = a[e] + b[e];
        if (s[e] > basis.delta1) inside = false;
      }
      unsigned l = basis.lambda_of(c1) + basis.lambda_of(c2);
      if (!inside || l > basis.delta2) continue;
      out[basis.column(basis.index_of(s), l)] += v1 * v2;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace mahler
