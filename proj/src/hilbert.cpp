#include "mahler/hilbert.hpp"

#include <algorithm>
#include <numeric>

#include "mahler/errors.hpp"
#include "mahler/linalg.hpp"
#include "mahler/parallel.hpp"

namespace mahler {

std::vector<std::vector<unsigned>> exponents_up_to(size_t m, unsigned d) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> e(m, 0);
  while (true) {
    if (std::accumulate(e.begin(), e.end(), 0u) <= d) out.push_back(e);
    size_t i = 0;
    while (i < m && e[i] == d) e[i++] = 0;
    if (i == m) break;
    ++e[i];
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    unsigned sa = std::accumulate(a.begin(), a.end(), 0u), sb = std::accumulate(b.begin(), b.end(), 0u);
    if (sa != sb) return sa < sb;
    return a > b;
  });
  return out;
}

size_t relation_kernel_dim(const std::vector<TruncSeries>& g, long D, size_t N) {
  const size_t cols = g.size() * (D + 1);
  QMatrix conv(N, cols);
  for (size_t n = 0; n < N; ++n)
    for (size_t j = 0; j < g.size(); ++j)
      for (long e = 0; e <= D && static_cast<size_t>(e) <= n; ++e) conv(n, j * (D + 1) + e) = g[j][n - e];
  return cols - rank(conv);
}

namespace {

std::vector<TruncSeries> monomial_family(const std::vector<TruncSeries>& f, unsigned d, size_t order) {
  std::vector<TruncSeries> out;
  for (const auto& e : exponents_up_to(f.size(), d)) {
    TruncSeries t = TruncSeries::from_poly(Poly(Rational(1)), order);
    for (size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) t = t * f[i].truncated(order);
    out.push_back(t);
  }
  return out;
}

struct RankScan {
  std::vector<size_t> k;
  size_t rank = 0;
  long stable_from = 0;
  bool stable = false;
};

RankScan scan(const std::vector<TruncSeries>& fam, long D, size_t N) {
  RankScan s;
  for (long j = 0; j <= D + 1; ++j) s.k.push_back(relation_kernel_dim(fam, j, N));
  std::vector<size_t> r;
  for (long j = 0; j <= D; ++j) r.push_back(s.k[j + 1] - s.k[j]);
  s.stable = D >= 1 && r[D] == r[D - 1];
  s.rank = r[D];
  long from = D;
  while (from > 0 && r[from - 1] == r[D]) --from;
  s.stable_from = from;
  return s;
}

Integer binom(unsigned long n, unsigned long k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

}  // namespace

PhiValue phi_function(const std::vector<TruncSeries>& f, unsigned d, long D, size_t N) {
  if (f.empty()) throw MahlerError(ErrorKind::Input, "empty family");
  if (D < 1) throw MahlerError(ErrorKind::Input, "relation degree must be at least 1");
  size_t order = f[0].order();
  for (const auto& s : f) order = std::min(order, s.order());
  if (order < 2 * N)
    throw MahlerError(ErrorKind::InsufficientOrder, "series order must reach 2N for the order check",
                      static_cast<long>(2 * N));
  std::vector<TruncSeries> fam = monomial_family(f, d, 2 * N);
  if (N < fam.size() * (D + 2) + 16)
    throw MahlerError(ErrorKind::InsufficientOrder, "N must be at least M(D+2) + 16",
                      static_cast<long>(fam.size() * (D + 2) + 16));
  RankScan a = scan(fam, D, N);
  RankScan b = scan(fam, D, 2 * N);
  if (!a.stable || !b.stable)
    throw MahlerError(ErrorKind::RankNotStabilized, "module rank still changes at the relation degree", D);
  if (a.rank != b.rank)
    throw MahlerError(ErrorKind::RankNotStabilized, "module rank changes between orders N and 2N",
                      static_cast<long>(N));
  PhiValue v;
  v.d = d;
  v.monomials = fam.size();
  v.module_rank = a.rank;
  v.phi = fam.size() - a.rank;
  v.stabilized_D = std::max(a.stable_from, b.stable_from);
  v.kernel_dims = a.k;
  return v;
}

PhiProfile phi_profile(const std::vector<TruncSeries>& f, unsigned dmax, long D, size_t N) {
  PhiProfile p;
  p.reldeg = D;
  p.order = N;
  std::vector<PhiValue> vals(dmax + 1);
  parallel_for(dmax + 1, [&](size_t d) { vals[d] = phi_function(f, static_cast<unsigned>(d), D, N); });
  for (const auto& v : vals) {
    p.d_values.push_back(v.d);
    p.phi.push_back(v.phi);
    p.stabilized_D = std::max(p.stabilized_D, v.stabilized_D);
  }
  return p;
}

TrdegEstimate estimate_trdeg(const std::vector<size_t>& phi) {
  TrdegEstimate est;
  std::vector<long> cur(phi.begin(), phi.end());
  est.differences.push_back(cur);
  auto tail_zero = [](const std::vector<long>& v) {
    size_t start = v.size() >= 2 ? v.size() - 2 : 0;
    return !v.empty() && std::all_of(v.begin() + start, v.end(), [](long x) { return x == 0; });
  };
  while (cur.size() > 1) {
    std::vector<long> next;
    for (size_t i = 0; i + 1 < cur.size(); ++i) next.push_back(cur[i + 1] - cur[i]);
    est.differences.push_back(next);
    cur = next;
  }
  // t_hat: last order whose tail is not identically zero before the first vanishing tail
  long t = 0;
  bool found = false;
  for (size_t j = 0; j + 1 < est.differences.size(); ++j) {
    if (tail_zero(est.differences[j + 1])) {
      t = static_cast<long>(j);
      found = true;
      break;
    }
  }
  if (!found) t = static_cast<long>(est.differences.size()) - 1;
  est.t_hat = t;
  est.stable = found && est.differences[t + 1].size() >= 2;
  return est;
}

BoundsReport bounds_check(const PhiProfile& profile, long t) {
  if (t < 0) throw MahlerError(ErrorKind::Input, "t must be non-negative");
  BoundsReport r;
  r.t = t;
  bool first = true;
  for (size_t i = 0; i < profile.phi.size(); ++i) {
    unsigned d = profile.d_values[i];
    Integer phi(static_cast<unsigned long>(profile.phi[i]));
    r.delta = std::max(r.delta, profile.phi[i]);
    Integer lower = t == 0 ? Integer(1) : binom(d + t, t);
    if (phi < lower) {
      r.lower_ok = false;
      r.lower_failures.push_back(d);
    }
    if (d == 0) continue;
    Rational ratio(phi, ipow(Integer(d), t));
    ratio.canonicalize();
    if (first || ratio > r.gamma2) r.gamma2 = ratio;
    if (first || ratio < r.gamma1) r.gamma1 = ratio;
    first = false;
  }
  r.pass = r.lower_ok;
  return r;
}

}  // namespace mahler
