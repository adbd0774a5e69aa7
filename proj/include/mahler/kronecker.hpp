#pragma once

#include <map>
#include <string>
#include <vector>

#include "mahler/lift.hpp"
#include "mahler/system.hpp"

namespace mahler {

using Exponents = std::vector<unsigned>;

constexpr size_t kKronCap = 256;

// Block layout: (A (x) B)(i*p + k, j*q + l) = A(i, j) * B(k, l).
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  const size_t p = b.rows(), q = b.cols();
  Matrix<T> out(a.rows() * p, a.cols() * q);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      for (size_t k = 0; k < p; ++k)
        for (size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = a(i, j) * b(k, l);
  return out;
}

void check_kron_size(size_t m, unsigned d, size_t cap);

template <class T>
Matrix<T> kron_power(const Matrix<T>& a, unsigned d, size_t cap = kKronCap) {
  if (d < 1) throw MahlerError(ErrorKind::Input, "Kronecker power needs d >= 1");
  check_kron_size(std::max(a.rows(), a.cols()), d, cap);
  Matrix<T> out = a;
  for (unsigned t = 1; t < d; ++t) out = kron(out, a);
  return out;
}

QVector kron(const QVector& a, const QVector& b);

// Kronecker coordinate i (0-based) has digits (i_1..i_d) in base m, most
// significant first; its monomial is prod X_{i_t}.  Classes are ordered by
// their least coordinate.
struct MonomialIndexMap {
  size_t m = 1;
  unsigned d = 1;
  std::vector<Exponents> lambdas;
  std::vector<std::vector<size_t>> classes;
  std::vector<size_t> representative;
  std::vector<size_t> class_of;  // coordinate -> class
};

MonomialIndexMap monomial_index_map(size_t m, unsigned d, size_t cap = kKronCap);

// A^(x)d with f0^(x)d.  The coefficient bound becomes C' = C^d K,
// rho' = 3 rho / 2, where K = max_n (n+1)^(d-1) (2/3)^n.
MahlerSystem kron_system(const MahlerSystem& sys, unsigned d, size_t cap = kKronCap);

using MultiPoly = std::map<Exponents, Rational>;

struct HomogeneousPoly {
  size_t m = 1;
  unsigned degree = 0;
  MultiPoly terms;  // no zero coefficients
  Rational eval(const QVector& x) const;
};

// Grammar: rationals, Xk (1 <= k <= m), '*', '^' with integer exponent,
// '+', '-', parentheses.
MultiPoly parse_polynomial(const std::string& text, size_t m);
HomogeneousPoly parse_homogeneous(const std::string& text, size_t m);
std::string to_string(const MultiPoly& p);

struct AlgebraicLift {
  size_t m = 1;
  unsigned degree = 0;
  std::map<Exponents, Poly> coefficients;  // X^lambda -> Pbar_lambda(z)
  size_t residual_order = 0;
  long lift_degree = 0;
  size_t order = 0;
  std::vector<long> degrees_tried;
  QVector tau;  // the Kronecker linear form
};

// tau for the Kronecker system: p_j at the representative of class j.
QVector kron_tau(const HomogeneousPoly& p, const MonomialIndexMap& map);

AlgebraicLift lift_algebraic_relation(const MahlerSystem& sys, const Rational& alpha, const HomogeneousPoly& p, long D,
                                      size_t N, bool escalate = false, long cap = 16);

// z-adic valuation of Pbar(z, f(z)) with the base series f.
size_t algebraic_residual(const AlgebraicLift& lift, const std::vector<TruncSeries>& f);

std::string format_lift(const AlgebraicLift& lift);

}  // namespace mahler
