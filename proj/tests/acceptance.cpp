// One PASS/FAIL line per acceptance criterion.  Exit status is nonzero when
// any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "mahler/errors.hpp"
#include "mahler/json_io.hpp"
#include "mahler/parallel.hpp"
#include "oracles_mahler.hpp"

using namespace mahler;

namespace {

MahlerSystem corpus(const std::string& name) { return load_system(std::string(MAHLER_CORPUS_DIR) + "/" + name + ".json"); }

struct Check {
  std::string failure;
  void require(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(s < budget_s, "time budget exceeded");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s / %.0f s", s, budget_s);
  std::cout << (c.failure.empty() ? "PASS" : "FAIL") << "  " << id << ". " << name << "  (" << buf << ")";
  if (!c.failure.empty()) std::cout << "  -- " << c.failure;
  std::cout << std::endl;
  if (!c.failure.empty()) ++failures;
}

const Rational kHalf{1, 2};

Rational eval_poly(const Poly& p, const Rational& x) { return p.eval(x); }

void series_vs_product(Check& c) {
  auto f = solve_series(corpus("thue_morse"), 64);
  std::vector<Rational> prod{1};
  for (unsigned n = 0; n <= 6; ++n) {
    std::vector<Rational> factor((1u << n) + 1);
    factor[0] = 1;
    factor[1u << n] = -1;
    prod = oracle::polymul(prod, factor);
  }
  prod.resize(64);
  c.require(f[0].coeffs() == prod, "coefficients differ from the product");
}

void cocycle_identity(Check& c) {
  for (const char* name : {"thue_morse", "cantor2", "cantor3"}) {
    MahlerSystem s = corpus(name);
    for (unsigned k = 0; k <= 3; ++k)
      for (unsigned l = 0; l <= 3; ++l) {
        unsigned long qk = 1;
        for (unsigned i = 0; i < k; ++i) qk *= s.q;
        RMatrix lhs = cocycle(s, k + l);
        RMatrix rhs = cocycle(s, k) * substitute_power(cocycle(s, l), qk);
        c.require(lhs == rhs, std::string(name) + ": symbolic identity");
        QMatrix a = eval_cocycle(s, kHalf, k + l);
        QMatrix b = eval_cocycle(s, kHalf, k) * eval(cocycle(s, l), rpow(kHalf, qk));
        c.require(a == b, std::string(name) + ": evaluated identity");
        c.require(a == eval(lhs, kHalf), std::string(name) + ": evaluation of the symbolic cocycle");
      }
  }
}

void regularity(Check& c) {
  RegularityCertificate a = certify_regular(corpus("cantor3"), kHalf);
  c.require(a.regular && a.checked_upto == 0, "cantor3 at 1/2");
  RegularityCertificate b = certify_regular(corpus("singular16"), Rational(1, 4));
  c.require(!b.regular && b.failing_k == 1, "[1 - 16z] at 1/4");
}

void lifting(Check& c) {
  MahlerSystem s = corpus("cantor3");
  auto f = solve_series(s, 128);
  FunctionRelationBasis b = guess_function_relations(f, 1, 64);
  PolyVector line{Poly(Rational(1)), Poly(Rational(-1)), Poly({Rational(0), Rational(1)})};
  c.require(b.basis.size() == 1 && b.basis[0] == line, "guessed basis is not the line (1, -1, z)");

  QVector tau{1, -1, kHalf};
  LiftResult r = lift_linear_relation(s, kHalf, tau, 1, 64);
  c.require(r.coefficients == line, "lift differs from (1, -1, z)");
  for (size_t i = 0; i < 3; ++i) c.require(eval_poly(r.coefficients[i], kHalf) == tau[i], "lift does not specialize to tau");
  // residual by direct convolution
  std::vector<Rational> sum(64);
  for (size_t i = 0; i < 3; ++i) {
    auto prod = oracle::polymul(r.coefficients[i].coeffs(), std::vector<Rational>(f[i].coeffs().begin(), f[i].coeffs().begin() + 64));
    for (size_t n = 0; n < 64 && n < prod.size(); ++n) sum[n] += prod[n];
  }
  for (size_t n = 0; n < 63; ++n) c.require(sum[n] == 0, "residual is nonzero below z^63");

  for (long D = 1; D <= 16; ++D) {
    size_t N = std::max<size_t>(64, 3 * (D + 1) + kOrderGuard);
    try {
      lift_linear_relation(s, kHalf, {1, -1, 0}, D, N);
      c.require(false, "tau = (1, -1, 0) lifted at D = " + std::to_string(D));
    } catch (const MahlerError& e) {
      c.require(e.kind() == ErrorKind::NoLiftAtDegree, "wrong error at D = " + std::to_string(D));
    }
  }
}

void kronecker(Check& c) {
  std::mt19937_64 rng(2024);
  auto random = [&](size_t n) {
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) m(i, j) = oracle::random_rational(rng, -9, 9, 9);
    return m;
  };
  for (int t = 0; t < 50; ++t) {
    size_t n = t % 2 ? 3 : 2, k = t % 3 ? 2 : 3;
    QMatrix a = random(n), b = random(k), x = random(n), y = random(k);
    c.require(kron(a, b) * kron(x, y) == kron(a * x, b * y), "mixed product");
    QMatrix ab = kron(a, b);
    Rational lhs = ab.rows() <= 6 ? oracle::leibniz_det(ab) : oracle::gauss_det(ab);
    Rational rhs = rpow(oracle::leibniz_det(a), k) * rpow(oracle::leibniz_det(b), n);
    c.require(lhs == rhs, "determinant identity");
    c.require(det(ab) == lhs, "library determinant disagrees with the oracle");
  }
}

void algebraic_lifting(Check& c) {
  MahlerSystem s = corpus("cantor3");
  HomogeneousPoly p = parse_homogeneous("X1*X3 - X2*X3 + 1/2*X3^2", 3);
  AlgebraicLift r = lift_algebraic_relation(s, kHalf, p, 1, 64);
  c.require(r.degree == 2, "lift is not of degree 2");
  for (const auto& [lambda, poly] : r.coefficients) {
    unsigned deg = 0;
    for (unsigned e : lambda) deg += e;
    c.require(deg == 2, "lift is not homogeneous");
    auto it = p.terms.find(lambda);
    Rational want = it == p.terms.end() ? Rational(0) : it->second;
    c.require(poly.eval(kHalf) == want, "lift does not specialize to P");
  }
  for (const auto& [lambda, coef] : p.terms) c.require(r.coefficients.count(lambda) == 1, "lift misses a term of P");
  // Pbar(z, f) mod z^48 by direct products of truncations
  auto f = solve_series(s, 48);
  std::vector<Rational> total(48);
  for (const auto& [lambda, poly] : r.coefficients) {
    std::vector<Rational> t = poly.coeffs();
    for (size_t i = 0; i < lambda.size(); ++i)
      for (unsigned e = 0; e < lambda[i]; ++e) {
        t = oracle::polymul(t, f[i].coeffs());
        t.resize(std::min<size_t>(t.size(), 48));
      }
    for (size_t n = 0; n < t.size(); ++n) total[n] += t[n];
  }
  for (const auto& x : total) c.require(x == 0, "Pbar(z, f) is nonzero below z^48");
}

void dimension_lemmas(Check& c) {
  MahlerSystem triv = corpus("trivial");
  DimProfile t = dim_profile(triv, kHalf, 1, 1, 8);
  for (const auto& row : t.rows) {
    c.require(row.rank == row.delta2 + 1, "trivial rank d(1, delta2) != delta2 + 1");
    // hand kernel: (y - 1) z^lambda, so the nullspace of the exact matrix has delta2 + 1 vectors
    auto ker = kernel_of_kset(triv, kHalf, 1, row.delta2, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    c.require(ker.size() == row.delta2 + 1, "trivial exact kernel dimension");
  }
  for (const char* name : {"trivial", "thue_morse", "cantor2", "cantor3"}) {
    MahlerSystem s = corpus(name);
    for (unsigned d1 : {1u, 2u}) {
      DimProfile p = dim_profile(s, kHalf, d1, 0, 10);
      c.require(p.increments_positive, std::string(name) + ": an increment is below 1");
      c.require(p.increments_stable, std::string(name) + ": increments not eventually constant");
      for (unsigned d2 = 0; d2 <= 10; ++d2)
        c.require(doubling_check(s, kHalf, d1, d2).pass, std::string(name) + ": doubling inequality");
    }
  }
}

void shift_invariance(Check& c) {
  for (const char* name : {"trivial", "thue_morse", "cantor2", "cantor3"}) {
    MahlerSystem s = corpus(name);
    KernelBasis kb = kernel_basis(s, kHalf, 1, 2);
    MonomialBasis basis = kb.basis.nus.empty() ? monomial_basis(s.m, 1, 2) : kb.basis;
    std::vector<SparseVec> vs = kb.vectors();
    std::vector<char> ok(vs.size(), 1);
    parallel_for(vs.size(), [&](size_t i) {
      for (unsigned k : {1u, 2u}) ok[i] = ok[i] && shift_check(basis, vs[i], s, kHalf, k, {5, 6, 7, 8});
    });
    for (char x : ok) c.require(x, std::string(name) + ": shift check fails");
  }
}

void heights(Check& c) {
  HeightGrowth h = height_growth(corpus("cantor2"), kHalf, 10);
  for (unsigned k = 1; k <= 10; ++k) {
    const LogValue& v = h.rows[k].heights[1];
    double want = std::ldexp(std::log(2.0), static_cast<int>(k) - 1);
    c.require(std::abs(v.value - want) <= 1e-9 * want, "height of the off-diagonal entry at k = " + std::to_string(k));
    c.require(v.certified_rel_error() <= 1e-9, "certified error too large");
  }
  MahlerSystem s = corpus("cantor3");
  auto f = solve_series(s, 200);
  AuxFunction aux = build_aux(s, f, kHalf, {1, -1, kHalf}, 1, 8, {2, 3, 4, 5, 6});
  DecayReport r = decay_report(aux, s, kHalf, 10);
  for (const auto& row : r.rows) {
    if (row.zero) continue;
    c.require(liouville_holds_exact(row.value), "exact Liouville inequality");
    LiouvilleReport lr = liouville_check(row.value);
    c.require(lr.holds && lr.slack.value + lr.slack.abs_err >= 0, "Liouville slack is negative");
  }
}

void proof_engine(Check& c) {
  MahlerSystem s = corpus("cantor3");
  auto f = solve_series(s, 200);
  AuxFunction aux = build_aux(s, f, kHalf, {1, -1, kHalf}, 1, 8, {2, 3, 4, 5, 6});
  bool nonzero = false;
  for (const auto& pj : aux.P) nonzero = nonzero || !is_zero(pj);
  c.require(nonzero && aux.v0 >= 0, "kernel vector is zero");
  c.require(aux.kset_heldout.size() >= 4, "fewer than 4 held-out k");
  CocycleChain chain(s, kHalf);
  for (unsigned k : aux.kset_heldout)
    c.require(oracle::Ep(aux, chain.A(k), chain.w(k)) == 0, "E_p does not vanish at held-out k = " + std::to_string(k));
  DecayReport r = decay_report(aux, s, kHalf, 10);
  c.require(r.values_agree, "frak E differs from P_v0");
  const unsigned p = static_cast<unsigned>(aux.p);
  c.require(yz_E(aux, p) == yz_E_factored(aux, p), "truncated formal identity");
}

void hilbert(Check& c) {
  auto f = solve_series(corpus("cantor2"), 256);
  PhiProfile p = phi_profile(f, 5, 3, 128);
  for (size_t i = 0; i < p.phi.size(); ++i) c.require(p.phi[i] == p.d_values[i] + 1, "phi(d) != d + 1");
  c.require(p.stabilized_D <= 3, "relation degree did not stabilize by 3");
  TrdegEstimate e = estimate_trdeg(p.phi);
  c.require(e.t_hat == 1 && e.stable, "trdeg estimate");
  c.require(bounds_check(p, 1).lower_ok, "lower bound C(d+1, 1)");
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

void determinism(Check& c) {
  const std::string cli = MAHLER_CLI_PATH;
  const std::string dir = MAHLER_CORPUS_DIR;
  const std::vector<std::string> cmds{
      "solve --system " + dir + "/thue_morse.json --order 32",
      "verify --system " + dir + "/cantor3.json --alpha 1/2 --tau 1,-1,1/2 --order 64",
      "cocycle --system " + dir + "/cantor3.json --k 3",
      "cocycle --system " + dir + "/cantor2.json --k 4 --eval",
      "regular --system " + dir + "/singular16.json --alpha 1/4",
      "dims --system " + dir + "/cantor2.json --delta1 1 --to 5 --doubling",
      "kernel --system " + dir + "/cantor2.json --delta1 1 --delta2 2",
      "guess --system " + dir + "/cantor3.json --deg 1 --order 64",
      "lift --system " + dir + "/cantor3.json --alpha 1/2 --tau 1,-1,1/2 --deg 1 --order 64",
      "lift --system " + dir + "/cantor3.json --alpha 1/2 --tau 1,-1,0 --deg 1 --order 64",
      "kron --system " + dir + "/cantor3.json --d 2",
      "kron-lift --system " + dir + "/cantor3.json --alpha 1/2 --poly 'X1*X3 - X2*X3 + 1/2*X3^2' --order 64",
      "hilbert --system " + dir + "/cantor2.json --dmax 3 --reldeg 3 --order 128",
      "heights --system " + dir + "/thue_morse.json --alpha 1/2 --kmax 8",
      "prove --system " + dir + "/cantor3.json --alpha 1/2 --tau 1,-1,1/2 --delta1 1 --delta2 8 --kmax 10",
  };
  for (const auto& cmd : cmds) {
    std::string a = run(cli + " --jobs 1 " + cmd + " --json");
    std::string b = run(cli + " --jobs 1 " + cmd + " --json");
    std::string d = run(cli + " --jobs 4 " + cmd + " --json");
    c.require(!a.empty(), "no output: " + cmd);
    c.require(a == b, "differs across runs: " + cmd);
    c.require(a == d, "differs between --jobs 1 and 4: " + cmd);
    try {
      c.require(Json::parse(a).is_object(), "output is not a JSON object: " + cmd);
    } catch (const std::exception&) {
      c.require(false, "not a single JSON document: " + cmd);
    }
  }
}

}  // namespace

int main() {
  criterion(1, "series solver vs product oracle", 1, series_vs_product);
  criterion(2, "cocycle identity", 5, cocycle_identity);
  criterion(3, "regularity certificates", 1, regularity);
  criterion(4, "lifting round-trip", 10, lifting);
  criterion(5, "Kronecker identities", 5, kronecker);
  criterion(6, "algebraic lifting", 30, algebraic_lifting);
  criterion(7, "dimension lemmas", 60, dimension_lemmas);
  criterion(8, "shift invariance", 30, shift_invariance);
  criterion(9, "heights and Liouville", 5, heights);
  criterion(10, "proof engine", 120, proof_engine);
  criterion(11, "Hilbert profile", 60, hilbert);
  criterion(12, "CLI JSON determinism", 600, determinism);
  std::cout << (failures ? "FAILED " + std::to_string(failures) + " criteria" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
