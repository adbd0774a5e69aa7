#pragma once

#include <optional>
#include <vector>

#include "mahler/system.hpp"

namespace mahler {

constexpr size_t kOrderGuard = 16;

using PolyVector = std::vector<Poly>;

struct FunctionRelationBasis {
  long degree_bound = 0;
  size_t verified_order = 0;  // every vector vanishes mod z^verified_order
  std::vector<PolyVector> basis;
};

// Flattened coefficients of a PolyVector, index i*(D+1)+d.
QVector flatten(const PolyVector& p, long D);
PolyVector unflatten(const QVector& v, size_t m, long D);

// z-adic valuation of sum_i p_i f_i, or the common order if it vanishes there.
size_t relation_residual(const PolyVector& p, const std::vector<TruncSeries>& f);

// Kernel of the N x m(D+1) convolution system, reduced-echelon over Q.
// Each vector is re-checked to order 2N when the series are long enough,
// and the search is redone at 2N if any vector fails there.
FunctionRelationBasis guess_function_relations(const std::vector<TruncSeries>& f, long D, size_t N);

struct ValueRelation {
  QVector tau;
  Rational alpha;
};

enum class ValueStatus { Verified, Refuted, Inconclusive };
const char* status_name(ValueStatus s);

struct ValueCheck {
  ValueStatus status = ValueStatus::Inconclusive;
  Rational partial_sum;  // S
  Rational tail_bound;   // T
  Rational margin;       // |S| - T, meaningful for Refuted
};

// S = sum_i tau_i sum_{n<=N} f_i[n] alpha^n against the tail bound from the
// system's coefficient bound.
ValueCheck verify_value_relation(const MahlerSystem& sys, const std::vector<TruncSeries>& f, const ValueRelation& rel,
                                 size_t N);

struct LiftResult {
  PolyVector coefficients;
  size_t residual_order = 0;
  long degree = 0;
  size_t order = 0;
  std::vector<long> degrees_tried;
};

// Solves sum_j c_j B_j(alpha) = tau over the guessed basis.
LiftResult lift_linear_relation(const MahlerSystem& sys, const Rational& alpha, const QVector& tau, long D, size_t N);

// Retries with D <- 2D up to cap, raising N to m(D+1)+guard as needed.
LiftResult lift_with_escalation(const MahlerSystem& sys, const Rational& alpha, const QVector& tau, long D, size_t N,
                                long cap = 16);

}  // namespace mahler
