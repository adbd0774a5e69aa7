#include "mahler/modular.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "mahler/errors.hpp"

namespace mahler {

u64 ModP::pow(u64 a, u64 e) const {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

u64 ModP::inv(u64 a) const {
  if (a % p == 0) throw MahlerError(ErrorKind::BadPrime, "division by zero modulo p");
  return pow(a, p - 2);
}

u64 ModP::from(const Integer& z) const {
  return mpz_fdiv_ui(z.get_mpz_t(), p);  // non-negative remainder
}

u64 ModP::from(const Rational& r) const {
  u64 d = from(r.get_den());
  if (d == 0) throw MahlerError(ErrorKind::BadPrime, "denominator vanishes modulo p");
  return mul(from(r.get_num()), inv(d));
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % sp == 0) return n == sp;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  ModP f{n};
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = f.pow(a, d);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s && comp; ++i) {
      x = f.mul(x, x);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

const std::vector<u64>& big_primes(size_t count) {
  static std::vector<u64> primes;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  u64 n = primes.empty() ? (u64(1) << 62) - 1 : primes.back() - 2;
  while (primes.size() < count) {
    if (is_prime_u64(n)) primes.push_back(n);
    n -= 2;
  }
  return primes;
}

void ModEchelon::reduce(std::vector<u64>& row) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    u64 c = row[piv_[i]];
    if (c == 0) continue;
    const auto& r = rows_[i];
    for (size_t j = piv_[i]; j < cols_; ++j)
      if (r[j]) row[j] = f_.sub(row[j], f_.mul(c, r[j]));
  }
}

bool ModEchelon::reduces_to_zero(std::vector<u64> row) const {
  reduce(row);
  return std::all_of(row.begin(), row.end(), [](u64 x) { return x == 0; });
}

bool ModEchelon::add_row(std::vector<u64> row) {
  reduce(row);
  size_t c = 0;
  while (c < cols_ && row[c] == 0) ++c;
  if (c == cols_) return false;
  u64 s = f_.inv(row[c]);
  for (size_t j = c; j < cols_; ++j) row[j] = f_.mul(row[j], s);
  // keep the stored rows fully reduced
  for (size_t i = 0; i < rows_.size(); ++i) {
    u64 e = rows_[i][c];
    if (e == 0) continue;
    for (size_t j = c; j < cols_; ++j)
      if (row[j]) rows_[i][j] = f_.sub(rows_[i][j], f_.mul(e, row[j]));
  }
  rows_.push_back(std::move(row));
  piv_.push_back(c);
  return true;
}

std::vector<size_t> ModEchelon::pivots() const {
  std::vector<size_t> p = piv_;
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<std::vector<u64>> ModEchelon::sorted_rows() const {
  std::vector<size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return piv_[a] < piv_[b]; });
  std::vector<std::vector<u64>> out;
  for (size_t i : order) out.push_back(rows_[i]);
  return out;
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
  Integer bound;
  mpz_sqrt(bound.get_mpz_t(), Integer(m / 2).get_mpz_t());
  Integer r0 = m, r1 = a % m, t0 = 0, t1 = 1, q, tmp;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    q = r0 / r1;
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || ::abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational out(r1, t1);
  out.canonicalize();
  return out;
}

Integer to_integer(u64 x) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &x);
  return z;
}

std::optional<std::vector<std::vector<Rational>>> reconstruct_rref(
    const std::vector<std::vector<std::vector<u64>>>& rows_by_prime, const std::vector<u64>& primes) {
  if (primes.size() < 2 || rows_by_prime.size() != primes.size()) return std::nullopt;
  const size_t use = primes.size() - 1;
  const ModP check{primes[use]};
  std::vector<Integer> ps, invs;
  Integer modulus = 1;
  for (size_t u = 0; u < use; ++u) {
    ps.push_back(to_integer(primes[u]));
    Integer inv;
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), ps.back().get_mpz_t());
    invs.push_back(inv);
    modulus *= ps.back();
  }
  const auto& first = rows_by_prime[0];
  std::vector<std::vector<Rational>> out(first.size());
  for (size_t i = 0; i < first.size(); ++i) {
    out[i].resize(first[i].size());
    for (size_t j = 0; j < first[i].size(); ++j) {
      Integer x = 0, mm = 1;
      for (size_t u = 0; u < use; ++u) {
        Integer t = (to_integer(rows_by_prime[u][i][j]) - x) * invs[u];
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), ps[u].get_mpz_t());
        x += mm * t;
        mm *= ps[u];
      }
      auto rr = rational_reconstruct(x, modulus);
      if (!rr || check.from(*rr) != rows_by_prime[use][i][j]) return std::nullopt;
      out[i][j] = *rr;
    }
  }
  return out;
}

}  // namespace mahler
