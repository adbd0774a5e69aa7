#include "mahler/json_io.hpp"

#include <fstream>
#include <set>

namespace mahler {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw MahlerError(ErrorKind::Input, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw MahlerError(ErrorKind::Input, where + ": unknown key '" + it.key() + "'");
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const Poly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

Json to_json(const RatFunc& r) {
  if (r.is_polynomial() && r.den().coeff(0) == 1) return to_json(r.num());
  Json o;
  o["num"] = to_json(r.num());
  o["den"] = to_json(r.den());
  return o;
}

Json to_json(const TruncSeries& s) {
  Json a = Json::array();
  for (const auto& c : s.coeffs()) a.push_back(to_string(c));
  return a;
}

Json to_json(const QVector& v) {
  Json a = Json::array();
  for (const auto& c : v) a.push_back(to_string(c));
  return a;
}

Json to_json(const QMatrix& m) {
  Json a = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json to_json(const RMatrix& m) {
  Json a = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json to_json(const LogValue& v) {
  Json o;
  o["value"] = std::stod(format_log(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v.certified_rel_error());
  o["cert_rel_err"] = std::stod(buf);
  return o;
}

Json to_json(const MahlerSystem& sys) {
  Json o;
  o["name"] = sys.name;
  o["q"] = sys.q;
  o["m"] = sys.m;
  o["A"] = to_json(sys.A);
  if (sys.f0) o["f0"] = to_json(*sys.f0);
  if (sys.coeff_bound) {
    Json cb;
    cb["C"] = to_string(sys.coeff_bound->C);
    cb["rho"] = to_string(sys.coeff_bound->rho);
    o["coeff_bound"] = cb;
  }
  return o;
}

Json to_json(const RegularityCertificate& c) {
  Json o;
  o["regular"] = c.regular;
  o["alpha"] = to_string(c.alpha);
  o["checked_upto"] = c.checked_upto;
  o["tail_bound_radius"] = to_string(c.tail_bound_radius);
  o["bad_poly"] = to_json(c.bad_poly);
  o["failing_k"] = c.failing_k ? Json(*c.failing_k) : Json(nullptr);
  o["failure_kind"] = c.failure_kind ? Json(*c.failure_kind) : Json(nullptr);
  return o;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
  throw MahlerError(ErrorKind::Input, "expected a rational string, got " + j.dump());
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) throw MahlerError(ErrorKind::Input, "expected a coefficient array, got " + j.dump());
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return Poly(std::move(c));
}

RatFunc ratfunc_from_json(const Json& j) {
  if (j.is_array()) return RatFunc(poly_from_json(j));
  if (j.is_string() || j.is_number_integer()) return RatFunc(rational_from_json(j));
  reject_unknown(j, {"num", "den"}, "rational function");
  if (!j.contains("num") || !j.contains("den"))
    throw MahlerError(ErrorKind::Input, "rational function needs 'num' and 'den'");
  Poly den = poly_from_json(j.at("den"));
  if (den.is_zero()) throw MahlerError(ErrorKind::Input, "rational function with zero denominator");
  return RatFunc(poly_from_json(j.at("num")), den);
}

QVector qvector_from_json(const Json& j) {
  if (!j.is_array()) throw MahlerError(ErrorKind::Input, "expected an array of rationals");
  QVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

MahlerSystem system_from_json(const Json& j) {
  reject_unknown(j, {"name", "q", "m", "A", "f0", "coeff_bound"}, "system");
  for (const char* key : {"q", "m", "A"})
    if (!j.contains(key)) throw MahlerError(ErrorKind::Input, std::string("system: missing key '") + key + "'");
  MahlerSystem sys;
  sys.name = j.value("name", std::string());
  if (!j.at("q").is_number_integer() || j.at("q").get<long>() < 2)
    throw MahlerError(ErrorKind::Input, "system: q must be an integer >= 2");
  if (!j.at("m").is_number_integer() || j.at("m").get<long>() < 1)
    throw MahlerError(ErrorKind::Input, "system: m must be a positive integer");
  sys.q = j.at("q").get<unsigned long>();
  sys.m = j.at("m").get<size_t>();
  const Json& a = j.at("A");
  if (!a.is_array() || a.size() != sys.m) throw MahlerError(ErrorKind::Input, "system: A must have m rows");
  sys.A = RMatrix(sys.m, sys.m);
  for (size_t i = 0; i < sys.m; ++i) {
    if (!a[i].is_array() || a[i].size() != sys.m) throw MahlerError(ErrorKind::Input, "system: A must have m columns");
    for (size_t k = 0; k < sys.m; ++k) sys.A(i, k) = ratfunc_from_json(a[i][k]);
  }
  if (j.contains("f0")) sys.f0 = qvector_from_json(j.at("f0"));
  if (j.contains("coeff_bound")) {
    const Json& cb = j.at("coeff_bound");
    reject_unknown(cb, {"C", "rho"}, "coeff_bound");
    if (!cb.contains("C") || !cb.contains("rho")) throw MahlerError(ErrorKind::Input, "coeff_bound needs C and rho");
    sys.coeff_bound = CoeffBound{rational_from_json(cb.at("C")), rational_from_json(cb.at("rho"))};
  }
  sys.validate();
  return sys;
}

MahlerSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MahlerError(ErrorKind::Input, "cannot open system file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MahlerError(ErrorKind::Input, "malformed JSON in '" + path + "': " + e.what());
  }
  return system_from_json(j);
}

RegularityCertificate certificate_from_json(const Json& j) {
  reject_unknown(j, {"regular", "alpha", "checked_upto", "tail_bound_radius", "bad_poly", "failing_k", "failure_kind"},
                 "certificate");
  RegularityCertificate c;
  c.regular = j.at("regular").get<bool>();
  c.alpha = rational_from_json(j.at("alpha"));
  c.checked_upto = j.at("checked_upto").get<long>();
  c.tail_bound_radius = rational_from_json(j.at("tail_bound_radius"));
  c.bad_poly = poly_from_json(j.at("bad_poly"));
  if (!j.at("failing_k").is_null()) c.failing_k = j.at("failing_k").get<long>();
  if (!j.at("failure_kind").is_null()) c.failure_kind = j.at("failure_kind").get<std::string>();
  return c;
}

namespace {

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

std::vector<Rational> rationals_from(const Json& j) {
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

QMatrix qmatrix_from_json(const Json& j, size_t cols) {
  QMatrix m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw MahlerError(ErrorKind::Input, "ragged matrix");
    for (size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
  }
  return m;
}

Json poly_vector(const PolyVector& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

PolyVector poly_vector_from(const Json& j) {
  PolyVector v;
  for (const auto& p : j) v.push_back(poly_from_json(p));
  return v;
}

}  // namespace

Json to_json(const KernelBasis& k) {
  Json o;
  o["m"] = k.m;
  o["delta1"] = k.delta1;
  o["delta2"] = k.delta2;
  o["rank"] = k.rank;
  o["full_size"] = to_string(k.full_size);
  o["kernel_dim"] = to_string(k.kernel_dim);
  o["stabilized"] = k.stabilized;
  o["basis_enumerated"] = !k.basis.nus.empty();
  o["const_entries"] = k.const_entries;
  o["var_entries"] = k.var_entries;
  o["const_values"] = rationals(k.const_values);
  o["reduced_nus"] = k.reduced_nus;
  o["reduced_pivots"] = k.reduced_pivots;
  o["reduced_rref"] = to_json(k.reduced_rref);
  o["k_used"] = k.k_used;
  o["held_out_verified"] = k.held_out_verified;
  o["exact_verified"] = k.exact_verified;
  o["primes"] = k.primes;
  return o;
}

KernelBasis kernel_from_json(const Json& j) {
  reject_unknown(j, {"m", "delta1", "delta2", "rank", "full_size", "kernel_dim", "stabilized", "basis_enumerated",
                     "const_entries", "var_entries", "const_values", "reduced_nus", "reduced_pivots", "reduced_rref",
                     "k_used", "held_out_verified", "exact_verified", "primes"},
                 "kernel");
  KernelBasis k;
  k.m = j.at("m").get<size_t>();
  k.delta1 = j.at("delta1").get<unsigned>();
  k.delta2 = j.at("delta2").get<unsigned>();
  k.rank = j.at("rank").get<size_t>();
  k.full_size = Integer(j.at("full_size").get<std::string>(), 10);
  k.kernel_dim = Integer(j.at("kernel_dim").get<std::string>(), 10);
  k.stabilized = j.at("stabilized").get<bool>();
  if (j.at("basis_enumerated").get<bool>()) k.basis = monomial_basis(k.m, k.delta1, k.delta2);
  k.const_entries = j.at("const_entries").get<std::vector<size_t>>();
  k.var_entries = j.at("var_entries").get<std::vector<size_t>>();
  k.const_values = rationals_from(j.at("const_values"));
  k.reduced_nus = j.at("reduced_nus").get<std::vector<Exponents>>();
  k.reduced_pivots = j.at("reduced_pivots").get<std::vector<size_t>>();
  k.reduced_rref = qmatrix_from_json(j.at("reduced_rref"), k.reduced_cols());
  k.k_used = j.at("k_used").get<std::vector<unsigned>>();
  k.held_out_verified = j.at("held_out_verified").get<std::vector<unsigned>>();
  k.exact_verified = j.at("exact_verified").get<std::vector<unsigned>>();
  k.primes = j.at("primes").get<std::vector<u64>>();
  return k;
}

Json to_json(const LiftResult& r) {
  Json o;
  o["coefficients"] = poly_vector(r.coefficients);
  o["residual_order"] = r.residual_order;
  o["degree"] = r.degree;
  o["order"] = r.order;
  o["degrees_tried"] = r.degrees_tried;
  return o;
}

LiftResult lift_from_json(const Json& j) {
  reject_unknown(j, {"coefficients", "residual_order", "degree", "order", "degrees_tried"}, "lift");
  LiftResult r;
  r.coefficients = poly_vector_from(j.at("coefficients"));
  r.residual_order = j.at("residual_order").get<size_t>();
  r.degree = j.at("degree").get<long>();
  r.order = j.at("order").get<size_t>();
  r.degrees_tried = j.at("degrees_tried").get<std::vector<long>>();
  return r;
}

Json to_json(const AlgebraicLift& r) {
  Json o;
  o["m"] = r.m;
  o["degree"] = r.degree;
  Json terms = Json::array();
  for (const auto& [lambda, p] : r.coefficients) terms.push_back(Json{{"monomial", lambda}, {"coefficient", to_json(p)}});
  o["terms"] = terms;
  o["residual_order"] = r.residual_order;
  o["lift_degree"] = r.lift_degree;
  o["order"] = r.order;
  o["degrees_tried"] = r.degrees_tried;
  o["tau"] = to_json(r.tau);
  return o;
}

AlgebraicLift algebraic_lift_from_json(const Json& j) {
  reject_unknown(j, {"m", "degree", "terms", "residual_order", "lift_degree", "order", "degrees_tried", "tau"},
                 "algebraic lift");
  AlgebraicLift r;
  r.m = j.at("m").get<size_t>();
  r.degree = j.at("degree").get<unsigned>();
  for (const auto& t : j.at("terms"))
    r.coefficients[t.at("monomial").get<Exponents>()] = poly_from_json(t.at("coefficient"));
  r.residual_order = j.at("residual_order").get<size_t>();
  r.lift_degree = j.at("lift_degree").get<long>();
  r.order = j.at("order").get<size_t>();
  r.degrees_tried = j.at("degrees_tried").get<std::vector<long>>();
  r.tau = qvector_from_json(j.at("tau"));
  return r;
}

Json to_json(const ValueCheck& c) {
  Json o;
  o["status"] = status_name(c.status);
  o["partial_sum"] = to_string(c.partial_sum);
  o["tail_bound"] = to_string(c.tail_bound);
  o["margin"] = to_string(c.margin);
  return o;
}

Json to_json(const FunctionRelationBasis& b) {
  Json o;
  o["degree_bound"] = b.degree_bound;
  o["verified_order"] = b.verified_order;
  Json a = Json::array();
  for (const auto& v : b.basis) a.push_back(poly_vector(v));
  o["basis"] = a;
  return o;
}

Json to_json(const DimProfile& p) {
  Json o;
  o["delta1"] = p.delta1;
  Json rows = Json::array();
  for (const auto& r : p.rows)
    rows.push_back(Json{{"delta2", r.delta2}, {"rank", r.rank}, {"increment", r.increment}});
  o["rows"] = rows;
  o["c1_estimate"] = p.c1_estimate;
  o["increments_stable"] = p.increments_stable;
  o["increments_positive"] = p.increments_positive;
  return o;
}

Json to_json(const DoublingReport& r) {
  Json o;
  o["delta1"] = r.delta1;
  o["delta2"] = r.delta2;
  o["rank_single"] = r.rank_single;
  o["rank_double"] = r.rank_double;
  o["factor"] = to_string(r.factor);
  o["pass"] = r.pass;
  return o;
}

Json to_json(const PhiProfile& p) {
  Json o;
  o["d"] = p.d_values;
  o["phi"] = p.phi;
  o["stabilized_reldeg"] = p.stabilized_D;
  o["reldeg"] = p.reldeg;
  o["order"] = p.order;
  return o;
}

Json to_json(const TrdegEstimate& t) {
  Json o;
  o["t_hat"] = t.t_hat;
  o["stable"] = t.stable;
  o["differences"] = t.differences;
  return o;
}

Json to_json(const BoundsReport& r) {
  Json o;
  o["t"] = r.t;
  o["lower_ok"] = r.lower_ok;
  o["lower_failures"] = r.lower_failures;
  o["gamma1"] = to_string(r.gamma1);
  o["gamma2"] = to_string(r.gamma2);
  o["delta"] = r.delta;
  o["pass"] = r.pass;
  return o;
}

Json to_json(const AuxFunction& a) {
  Json o;
  o["m"] = a.m;
  o["delta1"] = a.delta1;
  o["delta2"] = a.delta2;
  o["p"] = a.p;
  o["p_strict"] = a.p_strict;
  o["tau"] = to_json(a.tau);
  o["alpha"] = to_string(a.alpha);
  o["v0"] = a.v0;
  o["truncation_trivial"] = a.truncation_trivial;
  o["unknowns"] = a.unknowns;
  o["constraint_rank"] = a.constraint_rank;
  o["kset_constraints"] = a.kset_constraints;
  o["kset_heldout"] = a.kset_heldout;
  o["exact_verified"] = a.exact_verified;
  Json P = Json::array();
  for (size_t j = 0; j < a.P.size(); ++j) {
    Json terms = Json::array();
    for (size_t b = 0; b < a.complement.size(); ++b)
      if (a.P[j][b] != 0)
        terms.push_back(Json{{"nu", a.complement[b].first}, {"mu", a.complement[b].second}, {"c", to_string(a.P[j][b])}});
    P.push_back(terms);
  }
  o["P"] = P;
  return o;
}

Json to_json(const DecayReport& r) {
  Json o;
  Json rows = Json::array();
  for (const auto& d : r.rows) {
    Json x;
    x["k"] = d.k;
    x["value_bits"] = d.zero ? 0 : mpz_sizeinbase(d.value.get_num_mpz_t(), 2) + mpz_sizeinbase(d.value.get_den_mpz_t(), 2);
    x["zero"] = d.zero;
    x["f_source"] = d.f_source;
    x["agree"] = d.value == d.frak_value;
    if (!d.zero) {
      x["log_abs"] = to_json(d.log_abs);
      x["height"] = to_json(d.height);
      x["liouville_ok"] = d.liouville_ok;
    }
    rows.push_back(x);
  }
  o["rows"] = rows;
  o["c2_hat"] = r.c2_hat;
  o["c3_hat"] = r.c3_hat;
  o["values_agree"] = r.values_agree;
  o["liouville_ok"] = r.liouville_ok;
  o["relation_status"] = r.relation_status;
  return o;
}

Json to_json(const HeightGrowth& h) {
  Json o;
  Json rows = Json::array();
  for (const auto& r : h.rows) {
    Json hs = Json::array();
    for (const auto& v : r.heights) hs.push_back(to_json(v));
    rows.push_back(Json{{"k", r.k}, {"heights", hs}, {"max_ratio", r.max_ratio}});
  }
  o["rows"] = rows;
  o["gamma_hat"] = h.gamma_hat;
  o["bounded"] = h.bounded;
  o["stable"] = h.stable;
  return o;
}

}  // namespace mahler
