#pragma once

// Desk-scale auxiliary-function construction.  Evaluation points are taken
// directly as (A_k(alpha), alpha^(q^k)); no analytic change of variables is
// performed, so the relation space used here is the computed ideal I.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mahler/relation_ideal.hpp"

namespace mahler {

struct AuxOptions {
  unsigned max_k = 512;
  unsigned heldout = 4;
  size_t exact_bits = size_t(1) << 17;
  KernelOptions kernel;
};

struct AuxFunction {
  size_t m = 1;
  unsigned long q = 2;
  unsigned delta1 = 0, delta2 = 0;
  long p = 1;        // truncation order actually used
  long p_strict = 0;  // floor(delta1 delta2 / 2^(m^2 + 2))
  QVector tau;
  Rational alpha;
  std::vector<std::pair<Exponents, unsigned>> complement;  // pivot monomials (nu, mu)
  std::vector<QVector> P;                                  // P[j] over the complement
  long v0 = 0;
  bool truncation_trivial = false;  // every nonzero coordinate sits on z^mu with mu >= p
  std::vector<unsigned> kset_constraints, kset_heldout, exact_verified;
  size_t unknowns = 0, constraint_rank = 0;
  std::vector<QVector> f_coeffs;  // f_coeffs[n] = coefficient vector of z^n, n < p
};

// Truncated E_p evaluated at (Y, w).
Rational eval_Ep(const AuxFunction& aux, const QMatrix& y, const Rational& w);
// P_j evaluated at (Y, w).
Rational eval_Pj(const AuxFunction& aux, size_t j, const QMatrix& y, const Rational& w);

AuxFunction build_aux(const MahlerSystem& sys, const std::vector<TruncSeries>& f, const Rational& alpha,
                      const QVector& tau, unsigned delta1, unsigned delta2, const std::vector<unsigned>& kset,
                      const AuxOptions& opt = {});

// Sparse polynomial in the m^2 entries of Y and z; the last exponent is z.
using YZPoly = std::map<std::vector<unsigned>, Rational>;

YZPoly yz_mul(const YZPoly& a, const YZPoly& b, unsigned z_order);
YZPoly yz_add(const YZPoly& a, const YZPoly& b);
// F(Y, z) = sum_ij tau_i y_ij f_j(z), truncated below z^order.
YZPoly yz_F(const AuxFunction& aux, unsigned order);
YZPoly yz_P(const AuxFunction& aux, size_t j);
// E and (sum_{j>=v0} P_j F^(j-v0)) F^v0, both truncated below z^order.
YZPoly yz_E(const AuxFunction& aux, unsigned order);
YZPoly yz_E_factored(const AuxFunction& aux, unsigned order);

struct DecayRow {
  unsigned k = 0;
  Rational value;          // P_v0(A_k(alpha), alpha^(q^k))
  Rational frak_value;     // the same point through sum_{j>=v0} P_j F^(j-v0)
  std::string f_source;    // "polynomial" or "relation"
  bool zero = false;
  LogValue log_abs, height, liouville_floor;
  bool liouville_ok = true;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double c2_hat = 0, c3_hat = 0;
  bool values_agree = true;
  bool liouville_ok = true;
  std::string relation_status;  // verify_value_relation outcome
};

DecayReport decay_report(const AuxFunction& aux, const MahlerSystem& sys, const Rational& alpha, unsigned kmax,
                         size_t relation_order = 64);

struct HeightRow {
  unsigned k = 0;
  std::vector<LogValue> heights;  // row-major entries of A_k(alpha)
  double max_ratio = 0;           // max h / q^k
};

struct HeightGrowth {
  std::vector<HeightRow> rows;
  double gamma_hat = 0;
  bool bounded = true;  // h <= gamma_hat q^k on every row
  bool stable = false;  // running max moved by at most 2 gamma_hat / q^(kmax/2) over the second half
};

HeightGrowth height_growth(const MahlerSystem& sys, const Rational& alpha, unsigned kmax);

}  // namespace mahler
