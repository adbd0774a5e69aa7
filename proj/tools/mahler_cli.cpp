#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mahler/budget.hpp"
#include "mahler/errors.hpp"
#include "mahler/json_io.hpp"
#include "mahler/parallel.hpp"

using namespace mahler;

namespace {

constexpr const char* kGrammar = R"(Polynomial grammar for --poly:
  expr    := term (('+' | '-') term)*
  term    := unary ('*' unary)*
  unary   := '-' unary | power
  power   := primary ('^' integer)?
  primary := integer | integer '/' integer | Xk | xk | '(' expr ')'
Variables X1..Xm refer to the system's components.  The polynomial must be
homogeneous of degree >= 1; inhomogeneous relations are handled by augmenting
the system with the constant 1 and homogenizing.)";

struct Common {
  std::string system;
  std::string alpha = "1/2";
  bool json = false;
};

// Exit code for the run: 0 or 1 depending on the mathematical answer.
int g_status = 0;

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw MahlerError(ErrorKind::Input, "empty list '" + text + "'");
  return out;
}

std::vector<unsigned> parse_uints(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& r : parse_list(text)) {
    if (r.get_den() != 1 || r < 0) throw MahlerError(ErrorKind::Input, "expected non-negative integers: " + text);
    out.push_back(static_cast<unsigned>(r.get_num().get_ui()));
  }
  return out;
}

void emit(const Common& c, const Json& doc, const std::string& table) {
  if (c.json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << table;
}

std::string format_sparse(const MonomialBasis& basis, const SparseVec& v) {
  std::string out;
  for (const auto& [col, c] : v) {
    Rational a = abs(c);
    std::string mono = basis.label(col);
    std::string term = mono == "1" ? to_string(a) : (a == 1 ? mono : to_string(a) + "*" + mono);
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

std::string poly_vector_string(const PolyVector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

// ---- subcommands ----

void run_solve(const Common& c, size_t order) {
  MahlerSystem sys = load_system(c.system);
  Series f = solve_series(sys, order);
  Json doc;
  doc["system"] = sys.name;
  doc["order"] = order;
  doc["verified_order"] = verify_solution(sys, f);
  Json s = Json::array();
  for (const auto& x : f) s.push_back(to_json(x));
  doc["series"] = s;
  std::ostringstream t;
  for (size_t i = 0; i < f.size(); ++i) t << "f" << i + 1 << " = " << to_string(f[i].as_poly()) << " + O(z^" << order << ")\n";
  emit(c, doc, t.str());
}

void run_verify(const Common& c, const std::string& tau, const std::string& series_path, size_t order) {
  MahlerSystem sys = load_system(c.system);
  Json doc;
  std::ostringstream t;
  if (!series_path.empty()) {
    std::ifstream in(series_path);
    if (!in) throw MahlerError(ErrorKind::Input, "cannot open series file '" + series_path + "'");
    Json j = Json::parse(in);
    Series f;
    for (const auto& s : j) f.push_back(TruncSeries(qvector_from_json(s)));
    size_t n = verify_solution(sys, f);
    size_t full = f.empty() ? 0 : f[0].order();
    for (const auto& s : f) full = std::min(full, s.order());
    doc["verified_order"] = n;
    doc["series_order"] = full;
    t << "functional equation holds mod z^" << n << " (series order " << full << ")\n";
    if (n < full) g_status = 1;
  } else {
    if (tau.empty()) throw MahlerError(ErrorKind::Input, "verify needs --tau or --series");
    Rational alpha = parse_rational(c.alpha);
    ValueRelation rel{parse_list(tau), alpha};
    Series f = solve_series(sys, order + 1);
    ValueCheck v = verify_value_relation(sys, f, rel, order);
    doc = to_json(v);
    t << status_name(v.status) << ": S = " << to_string(v.partial_sum) << ", T = " << to_string(v.tail_bound) << "\n";
    if (v.status != ValueStatus::Verified) g_status = 1;
  }
  emit(c, doc, t.str());
}

void run_cocycle(const Common& c, unsigned k, bool evaluate) {
  MahlerSystem sys = load_system(c.system);
  Json doc;
  doc["k"] = k;
  std::ostringstream t;
  if (evaluate) {
    Rational alpha = parse_rational(c.alpha);
    QMatrix a = eval_cocycle(sys, alpha, k);
    doc["alpha"] = to_string(alpha);
    doc["value"] = to_json(a);
    for (size_t i = 0; i < a.rows(); ++i) {
      for (size_t j = 0; j < a.cols(); ++j) t << (j ? "  " : "") << to_string(a(i, j));
      t << "\n";
    }
  } else {
    RMatrix a = cocycle(sys, k);
    doc["matrix"] = to_json(a);
    for (size_t i = 0; i < a.rows(); ++i)
      for (size_t j = 0; j < a.cols(); ++j)
        t << "A[" << i + 1 << "," << j + 1 << "] = (" << to_string(a(i, j).num()) << ") / (" << to_string(a(i, j).den())
          << ")\n";
  }
  emit(c, doc, t.str());
}

void run_regular(const Common& c) {
  MahlerSystem sys = load_system(c.system);
  RegularityCertificate cert = certify_regular(sys, parse_rational(c.alpha));
  std::ostringstream t;
  t << (cert.regular ? "regular" : "not regular") << " at " << to_string(cert.alpha) << "; checked k < "
    << cert.checked_upto << ", tail radius " << to_string(cert.tail_bound_radius) << "\n";
  if (cert.failing_k) t << "fails at k = " << *cert.failing_k << " (" << cert.failure_kind.value_or("") << ")\n";
  if (!cert.regular) g_status = 1;
  emit(c, to_json(cert), t.str());
}

void run_dims(const Common& c, unsigned d1, unsigned from, unsigned to, bool doubling) {
  MahlerSystem sys = load_system(c.system);
  Rational alpha = parse_rational(c.alpha);
  DimProfile p = dim_profile(sys, alpha, d1, from, to);
  Json doc = to_json(p);
  std::ostringstream t;
  t << "delta2  rank  increment\n";
  for (const auto& r : p.rows) t << r.delta2 << "  " << r.rank << "  " << r.increment << "\n";
  t << "c1 estimate " << p.c1_estimate << (p.increments_stable ? " (stable)" : " (not stable)") << "\n";
  if (doubling) {
    Json d = Json::array();
    for (const auto& r : p.rows) {
      DoublingReport rep = doubling_check(sys, alpha, d1, r.delta2);
      d.push_back(to_json(rep));
      t << "doubling delta2=" << r.delta2 << ": " << rep.rank_double << " <= " << to_string(rep.factor) << " * "
        << rep.rank_single << (rep.pass ? " ok" : " FAILS") << "\n";
      if (!rep.pass) g_status = 1;
    }
    doc["doubling"] = d;
  }
  emit(c, doc, t.str());
}

void run_kernel(const Common& c, unsigned d1, unsigned d2, size_t limit) {
  MahlerSystem sys = load_system(c.system);
  KernelBasis kb = kernel_basis(sys, parse_rational(c.alpha), d1, d2);
  Json doc = to_json(kb);
  std::ostringstream t;
  t << "rank " << kb.rank << " of " << to_string(kb.full_size) << " monomials, kernel dimension "
    << to_string(kb.kernel_dim) << "\n";
  t << "k used " << kb.k_used.size() << ", held out";
  for (unsigned k : kb.held_out_verified) t << " " << k;
  t << "\n";
  Json vecs = Json::array();
  if (!kb.basis.nus.empty()) {
    std::vector<SparseVec> vs = kb.vectors();
    for (size_t i = 0; i < vs.size() && i < limit; ++i) {
      std::string s = format_sparse(kb.basis, vs[i]);
      vecs.push_back(s);
      t << "  " << s << "\n";
    }
    if (vs.size() > limit) t << "  ... " << vs.size() - limit << " more\n";
  }
  doc["vectors"] = vecs;
  emit(c, doc, t.str());
}

void run_guess(const Common& c, long deg, size_t order) {
  MahlerSystem sys = load_system(c.system);
  Series f = solve_series(sys, 2 * order);
  FunctionRelationBasis b = guess_function_relations(f, deg, order);
  std::ostringstream t;
  t << b.basis.size() << " relation(s) of degree <= " << deg << ", verified mod z^" << b.verified_order << "\n";
  for (const auto& v : b.basis) t << "  " << poly_vector_string(v) << "\n";
  emit(c, to_json(b), t.str());
}

void run_lift(const Common& c, const std::string& tau, long deg, size_t order, long cap) {
  MahlerSystem sys = load_system(c.system);
  LiftResult r = lift_with_escalation(sys, parse_rational(c.alpha), parse_list(tau), deg, order, cap);
  std::ostringstream t;
  t << "lift " << poly_vector_string(r.coefficients) << " at degree " << r.degree << ", residual mod z^"
    << r.residual_order << "\n";
  emit(c, to_json(r), t.str());
}

void run_kron(const Common& c, unsigned d) {
  MahlerSystem sys = load_system(c.system);
  MahlerSystem k = kron_system(sys, d);
  std::ostringstream t;
  t << k.name << ": m = " << k.m << ", degree " << degree(k.A) << "\n";
  emit(c, to_json(k), t.str());
}

void run_kron_lift(const Common& c, const std::string& poly, long deg, size_t order, long cap) {
  MahlerSystem sys = load_system(c.system);
  HomogeneousPoly p = parse_homogeneous(poly, sys.m);
  AlgebraicLift r = lift_algebraic_relation(sys, parse_rational(c.alpha), p, deg, order, true, cap);
  Json doc = to_json(r);
  doc["formatted"] = format_lift(r);
  std::ostringstream t;
  t << format_lift(r) << "\n(degree " << r.degree << " in X, lift degree " << r.lift_degree << ", residual mod z^"
    << r.residual_order << ")\n";
  emit(c, doc, t.str());
}

void run_hilbert(const Common& c, unsigned dmax, long reldeg, size_t order, bool unit) {
  MahlerSystem sys = load_system(c.system);
  if (unit) sys = augment_with_unit(sys);
  Series f = solve_series(sys, 2 * order);
  PhiProfile p = phi_profile(f, dmax, reldeg, order);
  TrdegEstimate e = estimate_trdeg(p.phi);
  BoundsReport b = bounds_check(p, e.t_hat);
  Json doc;
  doc["profile"] = to_json(p);
  doc["trdeg"] = to_json(e);
  doc["bounds"] = to_json(b);
  std::ostringstream t;
  t << "d  phi\n";
  for (size_t i = 0; i < p.phi.size(); ++i) t << p.d_values[i] << "  " << p.phi[i] << "\n";
  t << "t_hat = " << e.t_hat << (e.stable ? " (stable)" : " (not stable)") << "; gamma2 = " << to_string(b.gamma2)
    << ", lower bound " << (b.lower_ok ? "met" : "violated") << "\n";
  if (!b.pass) g_status = 1;
  emit(c, doc, t.str());
}

void run_heights(const Common& c, unsigned kmax) {
  MahlerSystem sys = load_system(c.system);
  Rational alpha = parse_rational(c.alpha);
  RegularityCertificate cert = certify_regular(sys, alpha);
  if (!cert.regular) throw MahlerError(ErrorKind::NotRegularAt, "system is not regular at alpha", cert.failing_k.value_or(-1));
  HeightGrowth h = height_growth(sys, alpha, kmax);
  std::ostringstream t;
  t << "k  max h/q^k\n";
  for (const auto& r : h.rows) t << r.k << "  " << r.max_ratio << "\n";
  t << "gamma_hat = " << h.gamma_hat << (h.stable ? " (stable)" : " (not stable)") << "\n";
  emit(c, to_json(h), t.str());
}

void run_prove(const Common& c, const std::string& tau, unsigned d1, unsigned d2, unsigned kmax,
               const std::string& kset) {
  MahlerSystem sys = load_system(c.system);
  Rational alpha = parse_rational(c.alpha);
  QVector t_vec = parse_list(tau);
  std::vector<unsigned> ks = kset.empty() ? std::vector<unsigned>{2, 3, 4, 5, 6} : parse_uints(kset);
  size_t p_guess = std::max<size_t>(1, static_cast<size_t>(d1) * d2 / 4);
  Series f = solve_series(sys, std::max<size_t>(p_guess, 65) + 1);
  AuxFunction aux = build_aux(sys, f, alpha, t_vec, d1, d2, ks);
  DecayReport rep = decay_report(aux, sys, alpha, kmax);
  const unsigned p = static_cast<unsigned>(aux.p);
  bool identity = yz_E(aux, p) == yz_E_factored(aux, p);
  bool heldout = true;
  CocycleChain chain(sys, alpha);
  for (unsigned k : aux.kset_heldout) heldout = heldout && eval_Ep(aux, chain.A(k), chain.w(k)) == 0;
  Json doc;
  doc["aux"] = to_json(aux);
  doc["heldout_vanish"] = heldout;
  doc["formal_identity"] = identity;
  doc["decay"] = to_json(rep);
  bool ok = heldout && identity && rep.values_agree && rep.liouville_ok;
  doc["pass"] = ok;
  std::ostringstream t;
  t << "p = " << aux.p << " (strict formula " << aux.p_strict << "), unknowns " << aux.unknowns << ", constraint rank "
    << aux.constraint_rank << ", v0 = " << aux.v0 << "\n";
  t << "held-out E_p " << (heldout ? "vanish" : "DO NOT vanish") << ", formal identity "
    << (identity ? "holds" : "FAILS") << "\n";
  t << "k  source  log|v|  h(v)\n";
  for (const auto& r : rep.rows) {
    t << r.k << "  " << r.f_source << "  ";
    if (r.zero)
      t << "zero\n";
    else
      t << format_log(r.log_abs) << "  " << format_log(r.height) << "\n";
  }
  t << "c2_hat = " << rep.c2_hat << ", c3_hat = " << rep.c3_hat << "\n";
  if (!ok) g_status = 1;
  emit(c, doc, t.str());
}

void add_common(CLI::App* sub, Common& c, bool alpha) {
  sub->add_option("--system", c.system, "system JSON file")->required();
  if (alpha) sub->add_option("--alpha", c.alpha, "rational evaluation point, e.g. 1/2")->capture_default_str();
  sub->add_flag("--json", c.json, "emit one JSON document on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    install_memory_budget_from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Exact computations with linear Mahler systems"};
  app.require_subcommand(1);
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for row-independent work")->check(CLI::Range(1u, 256u));

  Common c;
  size_t order = 32;
  unsigned k = 1, d1 = 1, d2 = 1, from = 0, to = 6, kmax = 10, dmax = 5, d = 2;
  long deg = 1, cap = 16, reldeg = 3;
  size_t limit = 20;
  bool eval_flag = false, doubling = false, unit = false;
  std::string tau, series, poly, kset;

  auto* solve = app.add_subcommand("solve", "power-series solution to a given order");
  add_common(solve, c, false);
  solve->add_option("--order", order)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check a value relation at alpha, or a user-supplied solution");
  add_common(verify, c, true);
  verify->add_option("--tau", tau, "comma-separated rationals");
  verify->add_option("--series", series, "JSON array of coefficient arrays");
  verify->add_option("--order", order)->capture_default_str();

  auto* coc = app.add_subcommand("cocycle", "A_k(z), or A_k(alpha) with --eval");
  add_common(coc, c, true);
  coc->add_option("--k", k)->capture_default_str();
  coc->add_flag("--eval", eval_flag, "evaluate at alpha");

  auto* reg = app.add_subcommand("regular", "regularity certificate at alpha");
  add_common(reg, c, true);

  auto* dims = app.add_subcommand("dims", "rank profile of the relation ideal");
  add_common(dims, c, true);
  dims->add_option("--delta1", d1)->capture_default_str();
  dims->add_option("--from", from)->capture_default_str();
  dims->add_option("--to", to)->capture_default_str();
  dims->add_flag("--doubling", doubling, "also compare rank(2 delta1, delta2) with 2^(m^2) rank(delta1, delta2)");

  auto* ker = app.add_subcommand("kernel", "relation ideal I(delta1, delta2)");
  add_common(ker, c, true);
  ker->add_option("--delta1", d1)->capture_default_str();
  ker->add_option("--delta2", d2)->capture_default_str();
  ker->add_option("--limit", limit, "number of vectors to print")->capture_default_str();

  auto* guess = app.add_subcommand("guess", "linear relations over Q[z] among the solution series");
  add_common(guess, c, false);
  guess->add_option("--deg", deg)->capture_default_str();
  guess->add_option("--order", order)->capture_default_str();

  auto* lift = app.add_subcommand("lift", "lift a value relation at alpha to a functional relation");
  add_common(lift, c, true);
  lift->add_option("--tau", tau, "comma-separated rationals")->required();
  lift->add_option("--deg", deg)->capture_default_str();
  lift->add_option("--order", order)->capture_default_str();
  lift->add_option("--cap", cap, "largest degree tried")->capture_default_str();

  auto* kron = app.add_subcommand("kron", "Kronecker power system");
  add_common(kron, c, false);
  kron->add_option("--d", d)->capture_default_str();

  auto* klift = app.add_subcommand("kron-lift", "lift a homogeneous algebraic relation at alpha");
  add_common(klift, c, true);
  klift->add_option("--poly", poly, "homogeneous polynomial in X1..Xm")->required();
  klift->add_option("--deg", deg)->capture_default_str();
  klift->add_option("--order", order)->capture_default_str();
  klift->add_option("--cap", cap, "largest degree tried")->capture_default_str();
  klift->footer(kGrammar);

  auto* hil = app.add_subcommand("hilbert", "Hilbert function profile and transcendence degree");
  add_common(hil, c, false);
  hil->add_option("--dmax", dmax)->capture_default_str();
  hil->add_option("--reldeg", reldeg)->capture_default_str();
  hil->add_option("--order", order)->capture_default_str();
  hil->add_flag("--unit", unit, "augment with the constant 1 first");

  auto* hts = app.add_subcommand("heights", "heights of the entries of A_k(alpha)");
  add_common(hts, c, true);
  hts->add_option("--kmax", kmax)->capture_default_str();

  auto* prove = app.add_subcommand("prove", "auxiliary function, decay table and Liouville checks");
  add_common(prove, c, true);
  prove->add_option("--tau", tau, "comma-separated rationals")->required();
  prove->add_option("--delta1", d1)->capture_default_str();
  prove->add_option("--delta2", d2)->capture_default_str();
  prove->add_option("--kmax", kmax)->capture_default_str();
  prove->add_option("--kset", kset, "constraint k values, default 2,3,4,5,6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  set_jobs(jobs);

  try {
    if (*solve) run_solve(c, order);
    else if (*verify) run_verify(c, tau, series, order);
    else if (*coc) run_cocycle(c, k, eval_flag);
    else if (*reg) run_regular(c);
    else if (*dims) run_dims(c, d1, from, to, doubling);
    else if (*ker) run_kernel(c, d1, d2, limit);
    else if (*guess) run_guess(c, deg, order);
    else if (*lift) run_lift(c, tau, deg, order, cap);
    else if (*kron) run_kron(c, d);
    else if (*klift) run_kron_lift(c, poly, deg, order, cap);
    else if (*hil) run_hilbert(c, dmax, reldeg, order, unit);
    else if (*hts) run_heights(c, kmax);
    else if (*prove) run_prove(c, tau, d1, d2, kmax, kset);
  } catch (const MahlerError& e) {
    Json diag;
    diag["error"] = kind_name(e.kind());
    diag["message"] = e.what();
    diag["param"] = e.param() >= 0 ? Json(e.param()) : Json(nullptr);
    std::cerr << "error: " << kind_name(e.kind()) << ": " << e.what();
    if (e.param() >= 0) std::cerr << " (" << e.param() << ")";
    std::cerr << "\n";
    if (c.json) std::cout << diag.dump(2) << "\n";
    return is_math_negative(e.kind()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (c.json) std::cout << Json{{"error", "Input"}, {"message", e.what()}, {"param", nullptr}}.dump(2) << "\n";
    return 2;
  }
  return g_status;
}
