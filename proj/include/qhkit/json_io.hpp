#pragma once

#include <string>

#include "json.hpp"
#include "qhkit/asympt.hpp"
#include "qhkit/disk.hpp"
#include "qhkit/rational.hpp"
#include "qhkit/recover.hpp"

namespace qhkit {

using json = nlohmann::json;

inline constexpr const char* kSchemaTag = "qhkit/1";

// Parses text as JSON; malformed input raises errc::parse instead of a
// library exception.
json parse_document(const std::string& text);

// Complex numbers travel as {"re": x, "im": y}; polynomial coefficient lists
// as ascending [re, im] pairs.
json to_json(cplx z);
cplx cplx_from_json(const json& j);

json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

json to_json(const ComplexMeasure& nu);
ComplexMeasure measure_from_json(const json& j);

// Full documents: these carry the "schema" version field and the readers
// reject anything else.
json to_json(const DataTriple& d);
DataTriple data_from_json(const json& j);

json to_json(const DiskData& e);
DiskData disk_from_json(const json& j);

json to_json(const RationalFn& f);
json to_json(const ConditionReport& r);
json to_json(const ClassifyResult& r);
json to_json(const Decomposition& dec);
json to_json(const Expansion& e);
json to_json(const SumRuleReport& r);
// DataTriple document plus the validation residual.
json to_json(const RecoveryReport& r);

const char* verdict_name(ConditionVerdict v);
const char* verdict_name(Verdict v);
const char* verdict_name(SumRuleVerdict v);

// Checks the schema tag and that the document matches one of the published
// shapes; raises errc::parse otherwise.
void validate_document(const json& doc);

}  // namespace qhkit
