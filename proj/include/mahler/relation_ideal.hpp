#pragma once

#include <map>
#include <string>
#include <vector>

#include "mahler/system.hpp"

namespace mahler {

using Exponents = std::vector<unsigned>;  // flattened m x m exponent matrix nu

// All (nu, lambda) with nu_ij <= delta1 and lambda <= delta2.  nu is sorted
// by total degree, then by the flattened exponents in descending
// lexicographic order (so y11 precedes y12 within a degree); lambda is the
// fast index.  Column index = nu_index * (delta2 + 1) + lambda.
struct MonomialBasis {
  size_t m = 1;
  unsigned delta1 = 0, delta2 = 0;
  std::vector<Exponents> nus;

  size_t size() const { return nus.size() * (delta2 + 1); }
  size_t column(size_t nu_index, unsigned lambda) const { return nu_index * (delta2 + 1) + lambda; }
  const Exponents& nu_of(size_t col) const { return nus[col / (delta2 + 1)]; }
  unsigned lambda_of(size_t col) const { return static_cast<unsigned>(col % (delta2 + 1)); }
  size_t index_of(const Exponents& nu) const;  // throws if absent
  std::string label(size_t col) const;         // e.g. "y12^2*z^3"
};

constexpr size_t kDefaultMonomialCap = size_t(1) << 21;

// Graded ordering used for the monomial basis.
bool graded_less(const Exponents& a, const Exponents& b);

MonomialBasis monomial_basis(size_t m, unsigned delta1, unsigned delta2, size_t cap = kDefaultMonomialCap);

// Exact value Y^nu for an m x m matrix Y.
Rational monomial_value(const QMatrix& y, const Exponents& nu);

// Row k, column (nu, lambda): A_k(alpha)^nu * alpha^(q^k lambda), exact.
QMatrix eval_matrix(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                    const std::vector<unsigned>& kset);

using SparseVec = std::map<size_t, Rational>;  // column -> coefficient

// Exact P(Y, w) for a coefficient vector over the basis.
Rational evaluate(const MonomialBasis& basis, const SparseVec& p, const QMatrix& y, const Rational& w);

struct KernelOptions {
  unsigned k_min = 1;
  unsigned max_k = 1024;
  unsigned heldout = 4;
  size_t primes = 2;
  size_t exact_bits = size_t(1) << 17;  // exact re-verification when values stay below this size
  size_t reduced_cap = 60000;           // reduced column cap
};

// Computed approximation of I(delta1, delta2).  Entries of A_k(alpha) that
// are constant over every sampled k are factored out, so the stored echelon
// form lives on the monomials in the varying entries only; the full kernel
// basis is materialized on demand.
struct KernelBasis {
  MonomialBasis basis;  // empty nus when the full basis was not enumerated
  size_t m = 1;
  unsigned delta1 = 0, delta2 = 0;
  std::vector<size_t> const_entries, var_entries;  // flat indices i*m+j
  std::vector<Rational> const_values;
  std::vector<Exponents> reduced_nus;  // exponents on var_entries, graded order
  std::vector<size_t> reduced_pivots;
  QMatrix reduced_rref;
  size_t rank = 0;
  Integer full_size;    // number of monomials
  Integer kernel_dim;   // full_size - rank
  std::vector<unsigned> k_used, held_out_verified, exact_verified;
  std::vector<u64> primes;
  bool stabilized = false;

  size_t reduced_cols() const { return reduced_nus.size() * (delta2 + 1); }
  // Full exponent matrix of a reduced column's nu (zeros on constant entries).
  Exponents embed(size_t reduced_nu_index) const;
  // Complement I^perp as (nu, lambda) pivot monomials, in basis order.
  std::vector<std::pair<Exponents, unsigned>> pivot_monomials() const;
  // Reduced-echelon kernel basis over the full monomial basis.
  std::vector<SparseVec> vectors() const;
};

KernelBasis kernel_basis(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                         const KernelOptions& opt = {});

// Rank of the stabilized evaluation matrix only (no rational reconstruction).
struct RankResult {
  size_t rank = 0;
  size_t rows_used = 0;
  unsigned k_max = 0;
  bool primes_agree = true;
};
RankResult stabilized_rank(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                           const KernelOptions& opt = {});

// Exact kernel of eval_matrix for an explicit kset (small cases).
std::vector<QVector> kernel_of_kset(const MahlerSystem& sys, const Rational& alpha, unsigned delta1,
                                   unsigned delta2, const std::vector<unsigned>& kset);

bool is_member(const MonomialBasis& basis, const SparseVec& p, const MahlerSystem& sys, const Rational& alpha,
               const std::vector<unsigned>& kset);

struct DimRow {
  unsigned delta2;
  size_t rank;
  long increment;  // rank(delta2) - rank(delta2 - 1); -1 for the first row
};

struct DimProfile {
  unsigned delta1 = 0;
  std::vector<DimRow> rows;
  long c1_estimate = 0;
  bool increments_stable = false;  // last two increments equal
  bool increments_positive = false;  // every increment >= 1
};

DimProfile dim_profile(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned d2_from,
                       unsigned d2_to, const KernelOptions& opt = {});

struct DoublingReport {
  unsigned delta1, delta2;
  size_t rank_single, rank_double;
  Integer factor;  // 2^(m^2)
  bool pass;
};

DoublingReport doubling_check(const MahlerSystem& sys, const Rational& alpha, unsigned delta1, unsigned delta2,
                              const KernelOptions& opt = {});

// P(A_l(alpha) A_k(alpha^(q^l)), alpha^(q^(k+l))) == 0 for every l in ells.
bool shift_check(const MonomialBasis& basis, const SparseVec& p, const MahlerSystem& sys, const Rational& alpha,
                 unsigned k, const std::vector<unsigned>& ells);

// Box-truncated square of P: terms with nu_ij > delta1 or lambda > delta2 are dropped.
SparseVec box_square(const MonomialBasis& basis, const SparseVec& p);

}  // namespace mahler
