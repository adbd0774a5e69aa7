#pragma once

// Reference computations that need the library's data types but none of its
// algorithms.

#include <algorithm>

#include "mahler/proof.hpp"
#include "oracles.hpp"

namespace oracle {

using mahler::AuxFunction;
using mahler::Exponents;
using mahler::QMatrix;

// Determinant by plain Gaussian elimination with row swaps.
inline Rational gauss_det(QMatrix a) {
  const size_t n = a.rows();
  Rational d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t r = c;
    while (r < n && a(r, c) == 0) ++r;
    if (r == n) return 0;
    if (r != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(r, j), a(c, j));
      d = -d;
    }
    d *= a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

// Leibniz-formula determinant, independent of Bareiss.
inline Rational leibniz_det(const QMatrix& a) {
  size_t n = a.rows();
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  Rational acc = 0;
  do {
    Rational t = 1;
    size_t inversions = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    for (size_t i = 0; i < n; ++i) t *= a(i, perm[i]);
    acc += inversions % 2 ? Rational(-t) : t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

inline Rational mono(const QMatrix& y, const Exponents& nu) {
  Rational r = 1;
  for (size_t e = 0; e < nu.size(); ++e)
    for (unsigned t = 0; t < nu[e]; ++t) r *= y(e / y.cols(), e % y.cols());
  return r;
}

// E_p at (Y, w) by series arithmetic: P_j(Y, z) and Phi(z) = tau Y f(z) as
// plain coefficient lists, multiplied out, truncated below z^p, then
// evaluated at w.
inline Rational Ep(const AuxFunction& aux, const QMatrix& y, const Rational& w) {
  const size_t p = static_cast<size_t>(aux.p);
  std::vector<Rational> phi(p);
  for (size_t n = 0; n < p; ++n)
    for (size_t i = 0; i < aux.m; ++i)
      for (size_t j = 0; j < aux.m; ++j) phi[n] += aux.tau[i] * y(i, j) * aux.f_coeffs[n][j];
  std::vector<Rational> total(p), power{1};
  for (size_t j = 0; j < aux.P.size(); ++j) {
    std::vector<Rational> pj(p);
    for (size_t b = 0; b < aux.complement.size(); ++b) {
      unsigned mu = aux.complement[b].second;
      if (mu < p) pj[mu] += aux.P[j][b] * mono(y, aux.complement[b].first);
    }
    auto prod = oracle::polymul(pj, power);
    for (size_t n = 0; n < p && n < prod.size(); ++n) total[n] += prod[n];
    power = oracle::polymul(power, phi);
    power.resize(p);
  }
  Rational acc = 0, wp = 1;
  for (size_t n = 0; n < p; ++n, wp *= w) acc += total[n] * wp;
  return acc;
}

}  // namespace oracle
