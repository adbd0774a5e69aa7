#pragma once

#include <vector>

#include "mahler/poly.hpp"

namespace mahler {

// Exponent vectors of total degree <= d in m variables, by degree then
// descending lexicographic order.
std::vector<std::vector<unsigned>> exponents_up_to(size_t m, unsigned d);

// Q-dimension of {p : deg p_j <= D, sum_j p_j g_j = 0 mod z^N}.
size_t relation_kernel_dim(const std::vector<TruncSeries>& g, long D, size_t N);

struct PhiValue {
  unsigned d = 0;
  size_t monomials = 0;     // M
  size_t module_rank = 0;   // r
  size_t phi = 0;           // M - r
  long stabilized_D = 0;    // first D from which r stays constant up to the requested D
  std::vector<size_t> kernel_dims;  // K(0..D+1) at order N
};

// phi_z(d) through the rank of the relation module of the monomial family.
// Needs series of order >= 2N: the value must agree at N and 2N.
PhiValue phi_function(const std::vector<TruncSeries>& f, unsigned d, long D, size_t N);

struct PhiProfile {
  std::vector<unsigned> d_values;
  std::vector<size_t> phi;
  long stabilized_D = 0;  // max over d
  long reldeg = 0;
  size_t order = 0;
};

PhiProfile phi_profile(const std::vector<TruncSeries>& f, unsigned dmax, long D, size_t N);

struct TrdegEstimate {
  long t_hat = 0;
  bool stable = false;
  std::vector<std::vector<long>> differences;  // differences[j] = j-th finite difference
};

TrdegEstimate estimate_trdeg(const std::vector<size_t>& phi);

struct BoundsReport {
  long t = 0;
  bool lower_ok = true;            // phi(d) >= C(d+t, t) on the profile (t > 0), phi >= 1 (t = 0)
  std::vector<unsigned> lower_failures;
  Rational gamma2;                 // least constant with phi(d) <= gamma2 d^t for d >= 1
  Rational gamma1;                 // largest constant with gamma1 d^t <= phi(d) for d >= 1
  size_t delta = 0;                // t = 0 branch: max phi
  bool pass = true;
};

BoundsReport bounds_check(const PhiProfile& profile, long t);

}  // namespace mahler
