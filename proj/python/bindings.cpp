#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "qhkit/json_io.hpp"

namespace py = pybind11;

namespace {

using namespace qhkit;

const char* errc_name(errc kind) {
  switch (kind) {
    case errc::domain: return "domain";
    case errc::quadrature: return "quadrature";
    case errc::parse: return "parse";
    case errc::pole: return "pole";
    case errc::classify: return "classify";
    case errc::recovery: return "recovery";
    case errc::convergence: return "convergence";
  }
  return "error";
}

std::string dump(const json& doc) { return doc.dump(2); }

}  // namespace

PYBIND11_MODULE(_qhkit, m) {
  m.doc() = "quasi-Herglotz function calculus";
  m.attr("__version__") = "0.1.0";

  static py::exception<error> exc(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const error& e) {
      std::string msg = std::string(errc_name(e.kind())) + ": " + e.what();
      py::set_error(exc, msg.c_str());
    }
  });

  py::class_<ComplexMeasure>(m, "ComplexMeasure")
      .def(py::init([]() { return empty_measure(); }))
      .def_static("from_json",
                  [](const std::string& text) { return measure_from_json(parse_document(text)); })
      .def("to_json", [](const ComplexMeasure& nu) { return dump(to_json(nu)); })
      .def("mass", [](const ComplexMeasure& nu) { return mass(nu); })
      .def("total_variation", [](const ComplexMeasure& nu) { return total_variation(nu); })
      .def("density_value", [](const ComplexMeasure& nu, double t) { return density_value(nu, t); })
      .def("__repr__", [](const ComplexMeasure& nu) {
        return "<ComplexMeasure atoms=" + std::to_string(nu.atoms.size()) +
               " densities=" + std::to_string(nu.densities.size()) + ">";
      });
  m.def("empty_measure", &empty_measure);
  m.def("lambda_tilde", &lambda_tilde, py::arg("scale") = cplx(1.0));

  py::class_<DataTriple>(m, "DataTriple")
      .def(py::init<>())
      .def(py::init([](cplx a, cplx b, ComplexMeasure nu) {
             return DataTriple{a, b, std::move(nu)};
           }),
           py::arg("a"), py::arg("b"), py::arg("measure"))
      .def_readwrite("a", &DataTriple::a)
      .def_readwrite("b", &DataTriple::b)
      .def_readwrite("measure", &DataTriple::nu)
      .def_static("from_json",
                  [](const std::string& text) { return data_from_json(parse_document(text)); })
      .def("to_json", [](const DataTriple& d) { return dump(to_json(d)); });

  py::class_<FromData>(m, "FromData")
      .def(py::init<DataTriple>(), py::arg("data"))
      .def_readwrite("data", &FromData::data);
  py::class_<BuiltinFn>(m, "BuiltinFn")
      .def(py::init<std::string>(), py::arg("name"))
      .def_readonly("name", &BuiltinFn::name);

  py::class_<RationalFn>(m, "RationalFn")
      .def_static("parse", &parse_rational, py::arg("text"))
      .def("__call__", [](const RationalFn& f, cplx z) { return f(z); })
      .def("__str__", &print_rational);
  py::class_<PiecewiseRational>(m, "PiecewiseRational")
      .def(py::init([](RationalFn upper, RationalFn lower) {
             return PiecewiseRational{std::move(upper), std::move(lower)};
           }),
           py::arg("upper"), py::arg("lower"))
      .def_readwrite("upper", &PiecewiseRational::upper)
      .def_readwrite("lower", &PiecewiseRational::lower);
  py::class_<RationalPair>(m, "RationalPair")
      .def(py::init([](RationalFn upper, RationalFn lower) {
             return RationalPair{std::move(upper), std::move(lower)};
           }),
           py::arg("upper"), py::arg("lower"))
      .def_readwrite("upper", &RationalPair::upper)
      .def_readwrite("lower", &RationalPair::lower);

  m.def("builtin_names", [] { return builtin_names(); });
  m.def("make_builtin", &make_builtin, py::arg("name"));
  m.def("builtin_data", &builtin_data, py::arg("name"));
  m.def("from_data", &from_data, py::arg("data"));

  m.def("eval", [](const DataTriple& d, cplx z) { return eval(d, z); }, py::arg("data"),
        py::arg("z"));
  m.def("eval_boundary_fn", [](const BoundaryFn& f, cplx z) { return eval_boundary_fn(f, z); },
        py::arg("f"), py::arg("z"));
  m.def("conjugate_fn", &conjugate_fn, py::arg("data"));
  m.def("quasi_parts", &quasi_parts, py::arg("data"));
  m.def("is_ordinary_herglotz", &is_ordinary_herglotz, py::arg("data"));
  m.def("linear_combine",
        [](cplx alpha, const DataTriple& d1, cplx beta, const DataTriple& d2) {
          return linear_combine(alpha, d1, beta, d2);
        },
        py::arg("alpha"), py::arg("d1"), py::arg("beta"), py::arg("d2"));

  m.def("extract_a", [](const BoundaryFn& f) { return extract_a(f); }, py::arg("f"));
  m.def("extract_b", [](const BoundaryFn& f) { return extract_b(f); }, py::arg("f"));
  m.def("extract_b_via_mass",
        [](const BoundaryFn& f, const ComplexMeasure& nu) { return extract_b_via_mass(f, nu); },
        py::arg("f"), py::arg("measure"));
  m.def("recover_density", [](const BoundaryFn& f, double x) { return recover_density(f, x); },
        py::arg("f"), py::arg("x"));
  m.def("recover_atom", [](const BoundaryFn& f, double t0) { return recover_atom(f, t0); },
        py::arg("f"), py::arg("t0"));
  m.def("higher_order_vanishing",
        [](const BoundaryFn& f, double t0, int order) {
          return higher_order_vanishing(f, t0, order);
        },
        py::arg("f"), py::arg("t0"), py::arg("order"));
  m.def("recover_data",
        [](const BoundaryFn& f, std::vector<double> candidate_atoms) {
          RecoverySpec spec;
          spec.candidate_atoms = std::move(candidate_atoms);
          return recover_data(f, spec);
        },
        py::arg("f"), py::arg("candidate_atoms") = std::vector<double>{});

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_property_readonly("verdict",
                             [](const ConditionReport& r) { return verdict_name(r.verdict); })
      .def_readonly("witness", &ConditionReport::witness)
      .def_readonly("trace", &ConditionReport::trace)
      .def_readonly("detail", &ConditionReport::detail)
      .def("to_json", [](const ConditionReport& r) { return dump(to_json(r)); })
      .def("__repr__", [](const ConditionReport& r) {
        return "<ConditionReport " + std::string(verdict_name(r.verdict)) + ">";
      });

  m.def("check_growth", [](const BoundaryFn& f) { return check_growth(f); }, py::arg("f"));
  m.def("regularity_integral", [](const BoundaryFn& f, double r) { return regularity_integral(f, r); },
        py::arg("f"), py::arg("r"));
  m.def("check_regularity", [](const BoundaryFn& f) { return check_regularity(f); }, py::arg("f"));
  m.def("is_quasi_herglotz", [](const BoundaryFn& f) { return is_quasi_herglotz(f); }, py::arg("f"));
  m.def("check_real_symmetry", [](const BoundaryFn& f) { return check_real_symmetry(f); },
        py::arg("f"));
  m.def("check_zero_lower", [](const DataTriple& d) { return check_zero_lower(d); },
        py::arg("data"));
  m.def("check_zero_upper", [](const DataTriple& d) { return check_zero_upper(d); },
        py::arg("data"));
  m.def("check_signed_zero_props", [](const DataTriple& d) { return check_signed_zero_props(d); },
        py::arg("data"));

  py::class_<ClassifyResult>(m, "ClassifyResult")
      .def_property_readonly("verdict",
                             [](const ClassifyResult& r) { return verdict_name(r.verdict); })
      .def_readonly("offending_roots", &ClassifyResult::offending_roots)
      .def_readonly("detail", &ClassifyResult::detail)
      .def("to_json", [](const ClassifyResult& r) { return dump(to_json(r)); })
      .def("__repr__", [](const ClassifyResult& r) {
        return "<ClassifyResult " + std::string(verdict_name(r.verdict)) + ">";
      });
  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("b", &Decomposition::b)
      .def_readonly("common", &Decomposition::common)
      .def_readonly("a_upper", &Decomposition::a_upper)
      .def_readonly("upper_part", &Decomposition::upper_part)
      .def_readonly("a_lower", &Decomposition::a_lower)
      .def_readonly("lower_part", &Decomposition::lower_part)
      .def("to_json", [](const Decomposition& d) { return dump(to_json(d)); });

  m.def("classify_upper_zero_lower", &classify_upper_zero_lower, py::arg("f"));
  m.def("classify_both_halves", &classify_both_halves, py::arg("f"));
  m.def("classify_pair", &classify_pair, py::arg("pair"));
  m.def("decompose", &decompose, py::arg("pair"));
  m.def("rational_to_data", [](const RationalPair& pair) { return rational_to_data(pair); },
        py::arg("pair"));

  py::class_<CircleAtom>(m, "CircleAtom")
      .def(py::init([](double angle, cplx w) { return CircleAtom{angle, w}; }), py::arg("angle"),
           py::arg("w"))
      .def_readwrite("angle", &CircleAtom::angle)
      .def_readwrite("w", &CircleAtom::w);
  py::class_<CircleMeasure>(m, "CircleMeasure")
      .def(py::init<>())
      .def_readwrite("atom_at_1", &CircleMeasure::atom_at_1)
      .def_readwrite("atoms", &CircleMeasure::atoms);
  py::class_<DiskData>(m, "DiskData")
      .def(py::init<>())
      .def_readwrite("c", &DiskData::c)
      .def_readwrite("sigma", &DiskData::sigma)
      .def_static("from_json",
                  [](const std::string& text) { return disk_from_json(parse_document(text)); })
      .def("to_json", [](const DiskData& e) { return dump(to_json(e)); });

  m.def("cayley", [](cplx zeta) { return cayley(ExtComplex::of(zeta)); }, py::arg("zeta"));
  m.def("cayley_at_infinity", [] { return cayley(ExtComplex::infinity()); });
  m.def("inverse_cayley", [](cplx xi) { return inverse_cayley(ExtComplex::of(xi)); },
        py::arg("xi"));
  m.def("inverse_cayley_at_infinity", [] { return inverse_cayley(ExtComplex::infinity()); });
  m.def("cauchy_transform",
        [](const CircleMeasure& sigma, cplx tau) {
          return cauchy_transform(sigma, ExtComplex::of(tau));
        },
        py::arg("sigma"), py::arg("tau"));
  m.def("to_disk", [](const DataTriple& d) { return to_disk(d); }, py::arg("data"));
  m.def("from_disk", [](const DiskData& e) { return from_disk(e); }, py::arg("disk"));
  m.def("disk_identity_check", [](const DataTriple& d) { return identity_check(d); },
        py::arg("data"));
  m.def("circle_total_variation",
        [](const CircleMeasure& sigma) { return circle_total_variation(sigma); },
        py::arg("sigma"));

  py::class_<Expansion>(m, "Expansion")
      .def_readonly("at_infinity", &Expansion::at_infinity)
      .def_readonly("t0", &Expansion::t0)
      .def_readonly("order", &Expansion::order)
      .def_readonly("truncated", &Expansion::truncated)
      .def_readonly("coefficients", &Expansion::coefficients)
      .def_readonly("errors", &Expansion::errors)
      .def("coefficient", [](const Expansion& e, int power) { return coefficient(e, power); },
           py::arg("power"))
      .def("to_json", [](const Expansion& e) { return dump(to_json(e)); });

  m.def("expand_at_infinity",
        [](const BoundaryFn& f, int max_order) { return expand_at_infinity(f, max_order); },
        py::arg("f"), py::arg("max_order"));
  m.def("expand_at_point",
        [](const BoundaryFn& f, double t0, int max_order) {
          return expand_at_point(f, t0, max_order);
        },
        py::arg("f"), py::arg("t0"), py::arg("max_order"));
  m.def("sum_rule_integral",
        [](const BoundaryFn& f, int k, double eps, double y) {
          return sum_rule_integral(f, k, eps, y);
        },
        py::arg("f"), py::arg("k"), py::arg("eps"), py::arg("y"));

  py::class_<SumRuleReport>(m, "SumRuleReport")
      .def_property_readonly("verdict",
                             [](const SumRuleReport& r) { return verdict_name(r.verdict); })
      .def_readonly("predicted", &SumRuleReport::predicted)
      .def_property_readonly("table",
                             [](const SumRuleReport& r) {
                               std::vector<std::tuple<double, double, double>> rows;
                               rows.reserve(r.table.size());
                               for (const auto& s : r.table) {
                                 rows.emplace_back(s.eps, s.y, s.integral);
                               }
                               return rows;
                             })
      .def_readonly("inner_limits", &SumRuleReport::inner_limits)
      .def_readonly("detail", &SumRuleReport::detail)
      .def("to_json", [](const SumRuleReport& r) { return dump(to_json(r)); });

  m.def("sum_rule_check",
        [](const BoundaryFn& f, int k, const Expansion& at_anchor, const Expansion& at_inf) {
          return sum_rule_check(f, k, at_anchor, at_inf);
        },
        py::arg("f"), py::arg("k"), py::arg("at_anchor"), py::arg("at_infinity"));
}
