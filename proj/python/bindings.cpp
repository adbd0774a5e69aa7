#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mahler/errors.hpp"
#include "mahler/json_io.hpp"
#include "mahler/parallel.hpp"

namespace py = pybind11;
using namespace mahler;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

QVector rationals(const std::vector<std::string>& v) {
  QVector out;
  for (const auto& s : v) out.push_back(parse_rational(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_mahler, m) {
  m.doc() = "Exact computations with linear Mahler systems";

  // Instances carry .kind (the error name) and .param (-1 when absent).
  static PyObject* error_type = PyErr_NewException("mahler.MahlerError", PyExc_RuntimeError, nullptr);
  m.attr("MahlerError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MahlerError& e) {
      py::object inst = py::handle(error_type)(e.what());
      inst.attr("kind") = kind_name(e.kind());
      inst.attr("param") = e.param();
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  py::class_<MahlerSystem>(m, "System")
      .def_readonly("name", &MahlerSystem::name)
      .def_readonly("q", &MahlerSystem::q)
      .def_readonly("m", &MahlerSystem::m)
      .def("to_json", [](const MahlerSystem& s) { return to_py(to_json(s)); })
      .def("__repr__", [](const MahlerSystem& s) { return "<System " + s.name + " m=" + std::to_string(s.m) + ">"; });

  m.def("load_system", &load_system, py::arg("path"));
  m.def("system_from_json", [](const std::string& text) { return system_from_json(Json::parse(text)); },
        py::arg("text"));
  m.def("augment_with_unit", &augment_with_unit, py::arg("system"));
  m.def("kron_system", [](const MahlerSystem& s, unsigned d) { return kron_system(s, d); }, py::arg("system"),
        py::arg("d"));
  m.def("set_jobs", &set_jobs, py::arg("n"));

  m.def("solve_series",
        [](const MahlerSystem& s, size_t order) {
          Json a = Json::array();
          for (const auto& f : solve_series(s, order)) a.push_back(to_json(f));
          return to_py(a);
        },
        py::arg("system"), py::arg("order"));
  m.def("cocycle_at", [](const MahlerSystem& s, const std::string& alpha, unsigned k) {
    return to_py(to_json(eval_cocycle(s, parse_rational(alpha), k)));
  }, py::arg("system"), py::arg("alpha"), py::arg("k"));
  m.def("certify_regular", [](const MahlerSystem& s, const std::string& alpha) {
    return to_py(to_json(certify_regular(s, parse_rational(alpha))));
  }, py::arg("system"), py::arg("alpha"));
  m.def("kernel_basis", [](const MahlerSystem& s, const std::string& alpha, unsigned d1, unsigned d2) {
    return to_py(to_json(kernel_basis(s, parse_rational(alpha), d1, d2)));
  }, py::arg("system"), py::arg("alpha"), py::arg("delta1"), py::arg("delta2"));
  m.def("dim_profile", [](const MahlerSystem& s, const std::string& alpha, unsigned d1, unsigned from, unsigned to) {
    return to_py(to_json(dim_profile(s, parse_rational(alpha), d1, from, to)));
  }, py::arg("system"), py::arg("alpha"), py::arg("delta1"), py::arg("d2_from"), py::arg("d2_to"));
  m.def("guess_relations", [](const MahlerSystem& s, long D, size_t N) {
    return to_py(to_json(guess_function_relations(solve_series(s, 2 * N), D, N)));
  }, py::arg("system"), py::arg("degree"), py::arg("order"));
  m.def("verify_value_relation",
        [](const MahlerSystem& s, const std::string& alpha, const std::vector<std::string>& tau, size_t N) {
          ValueRelation rel{rationals(tau), parse_rational(alpha)};
          return to_py(to_json(verify_value_relation(s, solve_series(s, N + 1), rel, N)));
        },
        py::arg("system"), py::arg("alpha"), py::arg("tau"), py::arg("order"));
  m.def("lift",
        [](const MahlerSystem& s, const std::string& alpha, const std::vector<std::string>& tau, long D, size_t N,
           long cap) { return to_py(to_json(lift_with_escalation(s, parse_rational(alpha), rationals(tau), D, N, cap))); },
        py::arg("system"), py::arg("alpha"), py::arg("tau"), py::arg("degree") = 1, py::arg("order") = 64,
        py::arg("cap") = 16);
  m.def("kron_lift",
        [](const MahlerSystem& s, const std::string& alpha, const std::string& poly, long D, size_t N) {
          AlgebraicLift r =
              lift_algebraic_relation(s, parse_rational(alpha), parse_homogeneous(poly, s.m), D, N, true);
          Json j = to_json(r);
          j["formatted"] = format_lift(r);
          return to_py(j);
        },
        py::arg("system"), py::arg("alpha"), py::arg("poly"), py::arg("degree") = 1, py::arg("order") = 64);
  m.def("hilbert",
        [](const MahlerSystem& s, unsigned dmax, long reldeg, size_t order) {
          PhiProfile p = phi_profile(solve_series(s, 2 * order), dmax, reldeg, order);
          TrdegEstimate e = estimate_trdeg(p.phi);
          Json j;
          j["profile"] = to_json(p);
          j["trdeg"] = to_json(e);
          j["bounds"] = to_json(bounds_check(p, e.t_hat));
          return to_py(j);
        },
        py::arg("system"), py::arg("dmax"), py::arg("reldeg"), py::arg("order"));
  m.def("height_growth", [](const MahlerSystem& s, const std::string& alpha, unsigned kmax) {
    return to_py(to_json(height_growth(s, parse_rational(alpha), kmax)));
  }, py::arg("system"), py::arg("alpha"), py::arg("kmax"));
  m.def("prove",
        [](const MahlerSystem& s, const std::string& alpha, const std::vector<std::string>& tau, unsigned d1,
           unsigned d2, unsigned kmax, const std::vector<unsigned>& kset) {
          Rational a = parse_rational(alpha);
          size_t p = std::max<size_t>(1, static_cast<size_t>(d1) * d2 / 4);
          Series f = solve_series(s, std::max<size_t>(p, 65) + 1);
          AuxFunction aux = build_aux(s, f, a, rationals(tau), d1, d2, kset);
          Json j;
          j["aux"] = to_json(aux);
          j["formal_identity"] = yz_E(aux, static_cast<unsigned>(aux.p)) == yz_E_factored(aux, static_cast<unsigned>(aux.p));
          j["decay"] = to_json(decay_report(aux, s, a, kmax));
          return to_py(j);
        },
        py::arg("system"), py::arg("alpha"), py::arg("tau"), py::arg("delta1"), py::arg("delta2"), py::arg("kmax"),
        py::arg("kset") = std::vector<unsigned>{2, 3, 4, 5, 6});
}
