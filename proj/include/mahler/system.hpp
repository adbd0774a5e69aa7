#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/linalg.hpp"
#include "mahler/modular.hpp"
#include "mahler/poly.hpp"

namespace mahler {

using RMatrix = Matrix<RatFunc>;
using Series = std::vector<TruncSeries>;

struct CoeffBound {
  Rational C, rho;  // |c_n(f_i)| <= C * rho^n
};

struct MahlerSystem {
  std::string name;
  unsigned long q = 2;
  size_t m = 1;
  RMatrix A;
  std::optional<QVector> f0;
  std::optional<CoeffBound> coeff_bound;

  // Checks shapes, det A != 0, and (A(0) - I) f0 = 0 when A is pole-free at 0.
  void validate() const;
  bool pole_free_at_origin() const;
};

RMatrix r_identity(size_t n);
RatFunc det(const RMatrix& a);
RMatrix substitute_power(const RMatrix& a, unsigned long q);
QMatrix eval(const RMatrix& a, const Rational& x);  // throws NotRegularAt(-1) on a pole
long degree(const RMatrix& a);                      // max entry degree

constexpr long kDefaultDegreeBudget = 1L << 15;

// A_k(z) = A(z) A(z^q) ... A(z^{q^{k-1}}), A_0 = I.
RMatrix cocycle(const MahlerSystem& sys, unsigned k, long degree_budget = kDefaultDegreeBudget);

// Incremental exact values A_k(alpha) and w_k = alpha^{q^k}.
class CocycleChain {
 public:
  CocycleChain(const MahlerSystem& sys, const Rational& alpha);
  const QMatrix& A(unsigned k);
  const Rational& w(unsigned k);
  unsigned computed() const { return static_cast<unsigned>(mats_.size()) - 1; }

 private:
  void extend_to(unsigned k);
  const MahlerSystem* sys_;
  Rational alpha_;
  RatFunc detA_;
  std::vector<QMatrix> mats_;
  std::vector<Rational> ws_;
};

QMatrix eval_cocycle(const MahlerSystem& sys, const Rational& alpha, unsigned k);

// The same chain reduced modulo a prime; throws BadPrime when a denominator
// vanishes mod p.
class ModCocycleChain {
 public:
  ModCocycleChain(const MahlerSystem& sys, const Rational& alpha, const ModP& f);
  const std::vector<u64>& A(unsigned k);  // row-major m x m
  u64 w(unsigned k);
  const ModP& field() const { return f_; }

 private:
  void extend_to(unsigned k);
  const MahlerSystem* sys_;
  ModP f_;
  std::vector<std::vector<u64>> mats_;
  std::vector<u64> ws_;
};

QVector default_initial_vector(const MahlerSystem& sys);
Series solve_series(const MahlerSystem& sys, size_t order);
size_t verify_solution(const MahlerSystem& sys, const Series& f);

struct RegularityCertificate {
  bool regular = false;
  Rational alpha;
  long checked_upto = 0;        // K
  Rational tail_bound_radius;   // r0
  std::optional<long> failing_k;
  std::optional<std::string> failure_kind;  // "pole" or "singular"
  Poly bad_poly;                // Phi with the z^v factor stripped
};

RegularityCertificate certify_regular(const MahlerSystem& sys, const Rational& alpha);

MahlerSystem augment_with_unit(const MahlerSystem& sys);

}  // namespace mahler
