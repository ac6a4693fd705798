#include "qhkit/json_io.hpp"

#include <sstream>
#include <utility>

namespace qhkit {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(errc::parse, what); }

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) parse_fail(std::string("missing field \"") + name + "\"");
  return *it;
}

double require_number(const json& j, const char* name) {
  const json& v = require_field(j, name);
  if (!v.is_number()) parse_fail(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* name) {
  const json& v = require_field(j, name);
  if (!v.is_string()) parse_fail(std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

void require_schema(const json& j) {
  std::string tag = require_string(j, "schema");
  if (tag != kSchemaTag) {
    parse_fail("unsupported schema \"" + tag + "\" (expected \"" + kSchemaTag + "\")");
  }
}

json coeff_pair(cplx c) { return json::array({c.real(), c.imag()}); }

cplx coeff_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("coefficient entries must be [re, im] number pairs");
  }
  return cplx(j[0].get<double>(), j[1].get<double>());
}

json density_to_json(const DensityComponent& comp) {
  json j;
  if (const auto* r = std::get_if<RationalDensity>(&comp)) {
    j["kind"] = "rational";
    j["num"] = to_json(r->num);
    j["den"] = to_json(r->den);
  } else if (const auto* tr = std::get_if<TrigRationalDensity>(&comp)) {
    j["kind"] = "trig";
    j["phase"] = tr->phase == TrigPhase::sin ? "sin" : "cos";
    j["omega"] = tr->omega;
    j["num"] = to_json(tr->num);
    j["den"] = to_json(tr->den);
  } else {
    const auto& b = std::get<BumpDensity>(comp);
    j["kind"] = "bump";
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["num"] = to_json(b.num);
    j["den"] = to_json(b.den);
  }
  return j;
}

DensityComponent density_from_json(const json& j) {
  std::string kind = require_string(j, "kind");
  if (kind == "rational") {
    return RationalDensity{polynomial_from_json(require_field(j, "num")),
                           polynomial_from_json(require_field(j, "den"))};
  }
  if (kind == "trig") {
    std::string phase = require_string(j, "phase");
    if (phase != "sin" && phase != "cos") {
      parse_fail("trig density phase must be \"sin\" or \"cos\"");
    }
    return TrigRationalDensity{phase == "sin" ? TrigPhase::sin : TrigPhase::cos,
                               require_number(j, "omega"),
                               polynomial_from_json(require_field(j, "num")),
                               polynomial_from_json(require_field(j, "den"))};
  }
  if (kind == "bump") {
    return BumpDensity{require_number(j, "lo"), require_number(j, "hi"),
                       polynomial_from_json(require_field(j, "num")),
                       polynomial_from_json(require_field(j, "den"))};
  }
  parse_fail("unknown density kind \"" + kind + "\"");
}

std::vector<DensityComponent> densities_from_json(const json& j) {
  if (!j.is_array()) parse_fail("\"densities\" must be an array");
  std::vector<DensityComponent> out;
  out.reserve(j.size());
  for (const auto& entry : j) out.push_back(density_from_json(entry));
  return out;
}

json rational_fn_to_json(const RationalFn& f) {
  json j;
  j["num"] = to_json(f.num());
  j["den"] = to_json(f.den());
  j["text"] = print_rational(f);
  return j;
}

}  // namespace

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) parse_fail("malformed JSON document");
  return doc;
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx cplx_from_json(const json& j) {
  if (!j.is_object()) parse_fail("complex values must be {\"re\", \"im\"} objects");
  return cplx(require_number(j, "re"), require_number(j, "im"));
}

json to_json(const Polynomial& p) {
  json arr = json::array();
  for (cplx c : p.coeffs()) arr.push_back(coeff_pair(c));
  return arr;
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("polynomials must be non-empty coefficient arrays");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const auto& entry : j) coeffs.push_back(coeff_from(entry));
  return Polynomial(std::move(coeffs));
}

json to_json(const ComplexMeasure& nu) {
  json atoms = json::array();
  for (const auto& atom : nu.atoms) {
    atoms.push_back(json{{"t", atom.t}, {"w", to_json(atom.w)}});
  }
  json densities = json::array();
  for (const auto& comp : nu.densities) densities.push_back(density_to_json(comp));
  return json{{"atoms", std::move(atoms)}, {"densities", std::move(densities)}};
}

ComplexMeasure measure_from_json(const json& j) {
  if (!j.is_object()) parse_fail("measures must be objects with \"atoms\" and \"densities\"");
  std::vector<Atom> atoms;
  const json& ja = require_field(j, "atoms");
  if (!ja.is_array()) parse_fail("\"atoms\" must be an array");
  for (const auto& entry : ja) {
    atoms.push_back({require_number(entry, "t"), cplx_from_json(require_field(entry, "w"))});
  }
  return make_measure(std::move(atoms), densities_from_json(require_field(j, "densities")));
}

json to_json(const DataTriple& d) {
  return json{{"schema", kSchemaTag},
              {"a", to_json(d.a)},
              {"b", to_json(d.b)},
              {"measure", to_json(d.nu)}};
}

DataTriple data_from_json(const json& j) {
  require_schema(j);
  DataTriple d;
  d.a = cplx_from_json(require_field(j, "a"));
  d.b = cplx_from_json(require_field(j, "b"));
  d.nu = measure_from_json(require_field(j, "measure"));
  return d;
}

json to_json(const DiskData& e) {
  json atoms = json::array();
  for (const auto& atom : e.sigma.atoms) {
    atoms.push_back(json{{"angle", atom.angle}, {"w", to_json(atom.w)}});
  }
  json densities = json::array();
  for (const auto& comp : e.sigma.densities) densities.push_back(density_to_json(comp));
  return json{{"schema", kSchemaTag},
              {"c", to_json(e.c)},
              {"sigma", json{{"atom_at_1", to_json(e.sigma.atom_at_1)},
                             {"atoms", std::move(atoms)},
                             {"densities", std::move(densities)}}}};
}

DiskData disk_from_json(const json& j) {
  require_schema(j);
  DiskData out;
  out.c = cplx_from_json(require_field(j, "c"));
  const json& sigma = require_field(j, "sigma");
  out.sigma.atom_at_1 = cplx_from_json(require_field(sigma, "atom_at_1"));
  const json& ja = require_field(sigma, "atoms");
  if (!ja.is_array()) parse_fail("\"atoms\" must be an array");
  for (const auto& entry : ja) {
    double angle = require_number(entry, "angle");
    if (!(angle > 0.0 && angle < 2.0 * pi)) {
      parse_fail("circle atom angles must lie strictly between 0 and 2*pi");
    }
    out.sigma.atoms.push_back({angle, cplx_from_json(require_field(entry, "w"))});
  }
  auto densities = densities_from_json(require_field(sigma, "densities"));
  if (!densities.empty()) {
    // Validation only: the circle parametrization needs no decay gap.
    make_measure({}, densities, 0);
  }
  out.sigma.densities = std::move(densities);
  return out;
}

json to_json(const RationalFn& f) { return rational_fn_to_json(f); }

const char* verdict_name(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::satisfied: return "satisfied";
    case ConditionVerdict::violated: return "violated";
    default: return "inconclusive";
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::accepted: return "accepted";
    case Verdict::rejected: return "rejected";
    default: return "inconclusive";
  }
}

const char* verdict_name(SumRuleVerdict v) {
  switch (v) {
    case SumRuleVerdict::identity_holds: return "identity-holds";
    case SumRuleVerdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

json to_json(const ConditionReport& r) {
  json trace = json::array();
  for (const auto& [param, estimate] : r.trace) {
    trace.push_back(json::array({param, estimate}));
  }
  json j{{"schema", kSchemaTag},
         {"verdict", verdict_name(r.verdict)},
         {"trace", std::move(trace)},
         {"detail", r.detail}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return j;
}

json to_json(const ClassifyResult& r) {
  json roots = json::array();
  for (cplx root : r.offending_roots) roots.push_back(to_json(root));
  return json{{"schema", kSchemaTag},
              {"verdict", verdict_name(r.verdict)},
              {"offending_roots", std::move(roots)},
              {"detail", r.detail}};
}

json to_json(const Decomposition& dec) {
  return json{{"schema", kSchemaTag},
              {"b", to_json(dec.b)},
              {"common", rational_fn_to_json(dec.common)},
              {"a_upper", to_json(dec.a_upper)},
              {"upper_part", rational_fn_to_json(dec.upper_part)},
              {"a_lower", to_json(dec.a_lower)},
              {"lower_part", rational_fn_to_json(dec.lower_part)}};
}

json to_json(const Expansion& e) {
  json coeffs = json::array();
  json powers = json::array();
  json errors = json::array();
  for (size_t k = 0; k < e.coefficients.size(); ++k) {
    int power = e.at_infinity ? e.first_power() - static_cast<int>(k)
                              : e.first_power() + static_cast<int>(k);
    coeffs.push_back(coeff_pair(e.coefficients[k]));
    powers.push_back(power);
    errors.push_back(e.errors[k]);
  }
  json j{{"schema", kSchemaTag},
         {"order", e.order},
         {"truncated", e.truncated},
         {"coefficients", std::move(coeffs)},
         {"powers", std::move(powers)},
         {"errors", std::move(errors)}};
  if (e.at_infinity) {
    j["anchor"] = "infinity";
  } else {
    j["anchor"] = e.t0;
  }
  return j;
}

json to_json(const SumRuleReport& r) {
  json table = json::array();
  for (const auto& row : r.table) {
    table.push_back(json{{"eps", row.eps}, {"y", row.y}, {"integral", row.integral}});
  }
  json inner = json::array();
  for (const auto& [eps, value] : r.inner_limits) {
    inner.push_back(json::array({eps, value}));
  }
  return json{{"schema", kSchemaTag},
              {"verdict", verdict_name(r.verdict)},
              {"predicted", to_json(r.predicted)},
              {"table", std::move(table)},
              {"inner_limits", std::move(inner)},
              {"detail", r.detail}};
}

json to_json(const RecoveryReport& r) {
  json doc = to_json(r.data);
  doc["residual"] = r.max_residual;
  return doc;
}

void validate_document(const json& doc) {
  if (!doc.is_object()) parse_fail("documents must be JSON objects");
  require_schema(doc);
  if (doc.contains("a") && doc.contains("b") && doc.contains("measure")) {
    data_from_json(doc);
    return;
  }
  if (doc.contains("c") && doc.contains("sigma")) {
    disk_from_json(doc);
    return;
  }
  if (doc.contains("verdict")) {
    std::string v = require_string(doc, "verdict");
    for (const char* name :
         {"satisfied", "violated", "inconclusive", "accepted", "rejected", "identity-holds",
          "diverges"}) {
      if (v == name) return;
    }
    parse_fail("unknown verdict \"" + v + "\"");
  }
  if (doc.contains("anchor") && doc.contains("coefficients")) return;
  if (doc.contains("common") && doc.contains("upper_part")) return;
  parse_fail("document matches no published shape");
}

}  // namespace qhkit
