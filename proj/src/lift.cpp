#include "mahler/lift.hpp"

#include <algorithm>

#include "mahler/errors.hpp"
#include "mahler/parallel.hpp"

namespace mahler {

QVector flatten(const PolyVector& p, long D) {
  QVector v(p.size() * (D + 1));
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].degree() > D) throw MahlerError(ErrorKind::Input, "polynomial exceeds the degree bound");
    for (long d = 0; d <= p[i].degree(); ++d) v[i * (D + 1) + d] = p[i].coeff(d);
  }
  return v;
}

PolyVector unflatten(const QVector& v, size_t m, long D) {
  PolyVector out;
  for (size_t i = 0; i < m; ++i)
    out.emplace_back(std::vector<Rational>(v.begin() + i * (D + 1), v.begin() + (i + 1) * (D + 1)));
  return out;
}

size_t relation_residual(const PolyVector& p, const std::vector<TruncSeries>& f) {
  if (p.size() != f.size()) throw MahlerError(ErrorKind::Input, "relation length differs from the series count");
  size_t order = f.empty() ? 0 : f[0].order();
  for (const auto& s : f) order = std::min(order, s.order());
  for (size_t n = 0; n < order; ++n) {
    Rational c = 0;
    for (size_t i = 0; i < p.size(); ++i)
      for (long d = 0; d <= p[i].degree() && static_cast<size_t>(d) <= n; ++d) c += p[i].coeff(d) * f[i][n - d];
    if (c != 0) return n;
  }
  return order;
}

namespace {

std::vector<PolyVector> kernel_at(const std::vector<TruncSeries>& f, long D, size_t N) {
  const size_t m = f.size(), cols = m * (D + 1);
  QMatrix conv(N, cols);
  parallel_for(N, [&](size_t n) {
    for (size_t i = 0; i < m; ++i)
      for (long d = 0; d <= D && static_cast<size_t>(d) <= n; ++d) conv(n, i * (D + 1) + d) = f[i][n - d];
  });
  std::vector<QVector> rows = rref_rows(nullspace(conv), cols);
  std::vector<PolyVector> out;
  for (const auto& r : rows) out.push_back(unflatten(r, m, D));
  return out;
}

size_t min_order(const std::vector<TruncSeries>& f) {
  size_t o = f.empty() ? 0 : f[0].order();
  for (const auto& s : f) o = std::min(o, s.order());
  return o;
}

}  // namespace

FunctionRelationBasis guess_function_relations(const std::vector<TruncSeries>& f, long D, size_t N) {
  if (D < 0) throw MahlerError(ErrorKind::Input, "degree bound must be non-negative");
  if (f.empty()) throw MahlerError(ErrorKind::Input, "no series given");
  const size_t order = min_order(f);
  if (order < N) throw MahlerError(ErrorKind::InsufficientOrder, "series order below N", static_cast<long>(N));
  if (N < f.size() * (D + 1) + kOrderGuard)
    throw MahlerError(ErrorKind::InsufficientOrder, "N must be at least m(D+1) + 16", static_cast<long>(N));

  FunctionRelationBasis out;
  out.degree_bound = D;
  out.verified_order = N;
  out.basis = kernel_at(f, D, N);
  if (order >= 2 * N) {
    std::vector<TruncSeries> g;
    for (const auto& s : f) g.push_back(s.truncated(2 * N));
    bool all = std::all_of(out.basis.begin(), out.basis.end(),
                           [&](const PolyVector& p) { return relation_residual(p, g) >= 2 * N; });
    if (!all) out.basis = kernel_at(f, D, 2 * N);
    out.verified_order = 2 * N;
  }
  return out;
}

const char* status_name(ValueStatus s) {
  switch (s) {
    case ValueStatus::Verified: return "Verified";
    case ValueStatus::Refuted: return "Refuted";
    default: return "Inconclusive";
  }
}

ValueCheck verify_value_relation(const MahlerSystem& sys, const std::vector<TruncSeries>& f, const ValueRelation& rel,
                                 size_t N) {
  if (!sys.coeff_bound) throw MahlerError(ErrorKind::MissingCoeffBound, "system has no coefficient bound");
  if (rel.tau.size() != f.size() || f.size() != sys.m)
    throw MahlerError(ErrorKind::Input, "tau must have one entry per series");
  const Rational x = abs(rel.alpha) * sys.coeff_bound->rho;
  if (x >= 1) throw MahlerError(ErrorKind::RhoAlphaNotContracting, "rho * |alpha| must be below 1");
  if (min_order(f) < N + 1) throw MahlerError(ErrorKind::InsufficientOrder, "series order below N + 1", static_cast<long>(N + 1));

  ValueCheck out;
  Rational tau_l1 = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    tau_l1 += abs(rel.tau[i]);
    if (rel.tau[i] != 0) out.partial_sum += rel.tau[i] * f[i].partial_sum(rel.alpha, N + 1);
  }
  out.tail_bound = tau_l1 * sys.coeff_bound->C * rpow(x, N + 1) / (1 - x);
  Rational s = abs(out.partial_sum);
  out.margin = s - out.tail_bound;
  if (s <= out.tail_bound) out.status = ValueStatus::Verified;
  else if (s > 2 * out.tail_bound) out.status = ValueStatus::Refuted;
  else out.status = ValueStatus::Inconclusive;
  return out;
}

LiftResult lift_linear_relation(const MahlerSystem& sys, const Rational& alpha, const QVector& tau, long D, size_t N) {
  if (tau.size() != sys.m) throw MahlerError(ErrorKind::Input, "tau must have m entries");
  RegularityCertificate cert = certify_regular(sys, alpha);
  if (!cert.regular)
    throw MahlerError(ErrorKind::NotRegularAt, "system is not regular at alpha", cert.failing_k.value_or(-1));
  std::vector<TruncSeries> f = solve_series(sys, 2 * N);
  FunctionRelationBasis b = guess_function_relations(f, D, N);

  LiftResult out;
  out.degree = D;
  out.order = N;
  out.degrees_tried.push_back(D);
  // columns are the specializations B_j(alpha)
  QMatrix sys_mat(sys.m, b.basis.size());
  for (size_t j = 0; j < b.basis.size(); ++j)
    for (size_t i = 0; i < sys.m; ++i) sys_mat(i, j) = b.basis[j][i].eval(alpha);
  std::optional<QVector> c;
  if (is_zero(tau)) c = QVector(b.basis.size());
  else if (!b.basis.empty()) c = solve(sys_mat, tau);
  if (!c) throw MahlerError(ErrorKind::NoLiftAtDegree, "no functional relation of degree <= D specializes to tau", D);

  out.coefficients.assign(sys.m, Poly());
  for (size_t j = 0; j < b.basis.size(); ++j)
    if ((*c)[j] != 0)
      for (size_t i = 0; i < sys.m; ++i) out.coefficients[i] += b.basis[j][i] * (*c)[j];
  out.residual_order = relation_residual(out.coefficients, f);
  return out;
}

LiftResult lift_with_escalation(const MahlerSystem& sys, const Rational& alpha, const QVector& tau, long D, size_t N,
                                long cap) {
  std::vector<long> tried;
  long d = D;
  while (true) {
    size_t n = std::max(N, sys.m * (d + 1) + kOrderGuard);
    try {
      LiftResult r = lift_linear_relation(sys, alpha, tau, d, n);
      tried.push_back(d);
      r.degrees_tried = tried;
      return r;
    } catch (const MahlerError& e) {
      if (e.kind() != ErrorKind::NoLiftAtDegree) throw;
      tried.push_back(d);
      if (d >= cap) throw MahlerError(ErrorKind::NoLiftAtDegree, "no lift up to the degree cap", d);
      d = std::min(cap, std::max<long>(1, 2 * d));
    }
  }
}

}  // namespace mahler
