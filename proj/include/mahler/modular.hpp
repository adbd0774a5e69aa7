#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mahler/rational.hpp"

namespace mahler {

using u64 = std::uint64_t;

struct ModP {
  u64 p;

  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }
  u64 pow(u64 a, u64 e) const;
  u64 inv(u64 a) const;  // a != 0
  // Throws BadPrime when the denominator vanishes mod p.
  u64 from(const Rational& r) const;
  u64 from(const Integer& z) const;
};

bool is_prime_u64(u64 n);

// Deterministic list of distinct primes just below 2^62.
const std::vector<u64>& big_primes(size_t count);

// Incremental reduced row echelon form over F_p.
class ModEchelon {
 public:
  ModEchelon(const ModP& f, size_t cols) : f_(f), cols_(cols) {}

  // Reduces the row and inserts it; returns true if the rank grew.
  bool add_row(std::vector<u64> row);
  bool reduces_to_zero(std::vector<u64> row) const;

  size_t rank() const { return rows_.size(); }
  size_t cols() const { return cols_; }
  // Pivot columns in ascending order, with rows sorted to match.
  std::vector<size_t> pivots() const;
  std::vector<std::vector<u64>> sorted_rows() const;

 private:
  void reduce(std::vector<u64>& row) const;
  ModP f_;
  size_t cols_;
  std::vector<std::vector<u64>> rows_;
  std::vector<size_t> piv_;
};

// Rational reconstruction of a mod m with |num|, den <= sqrt(m/2).
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m);

// Reduced echelon forms of one matrix modulo several primes, all with the
// same pivots, lifted to Q: CRT over all but the last prime, rational
// reconstruction, then a check against the last prime.  nullopt when the
// reconstruction fails or disagrees with the check prime.
std::optional<std::vector<std::vector<Rational>>> reconstruct_rref(
    const std::vector<std::vector<std::vector<u64>>>& rows_by_prime, const std::vector<u64>& primes);

Integer to_integer(u64 x);

}  // namespace mahler
