#include <string>
#include <vector>

#include "doctest.h"
#include "qhkit/json_io.hpp"
#include "test_util.hpp"

using namespace qhkit;
using qhtest::check_close;
using qhtest::thrown_kind;

namespace {

const cplx I(0.0, 1.0);

DataTriple mixed_data() {
  RationalDensity rat{Polynomial::constant(1.0),
                      Polynomial({cplx(-1.0, 0.0), cplx(0.0, 2.0), cplx(1.0)})};
  TrigRationalDensity trig{TrigPhase::cos, 2.0, Polynomial({cplx(0.5, -0.25)}),
                           Polynomial({cplx(2.0), cplx(0.0), cplx(1.0)})};
  BumpDensity bump{-1.0, 2.0, Polynomial({cplx(0.0, 1.0), cplx(1.0)}),
                   Polynomial::constant(4.0)};
  return {cplx(0.3, -0.7), cplx(1.25),
          make_measure({{-2.0, cplx(0.5, 0.5)}, {1.5, cplx(0.0, -1.0)}}, {rat, trig, bump})};
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("parse_document accepts JSON and flags malformed text") {
    json doc = parse_document("{\"schema\": \"qhkit/1\", \"x\": [1, 2.5]}");
    CHECK(doc["x"][1].get<double>() == 2.5);
    CHECK(thrown_kind([] { parse_document("{\"schema\": "); }) == errc::parse);
    CHECK(thrown_kind([] { parse_document(""); }) == errc::parse);
  }

  TEST_CASE("complex values travel as re/im objects") {
    json j = to_json(cplx(1.5, -2.25));
    CHECK(j["re"].get<double>() == 1.5);
    CHECK(j["im"].get<double>() == -2.25);
    CHECK(cplx_from_json(j) == cplx(1.5, -2.25));

    CHECK(thrown_kind([] { cplx_from_json(json::array({1.0, 2.0})); }) == errc::parse);
    CHECK(thrown_kind([] { cplx_from_json(json{{"re", 1.0}}); }) == errc::parse);
    CHECK(thrown_kind([] { cplx_from_json(json{{"re", 1.0}, {"im", "x"}}); }) == errc::parse);
  }

  TEST_CASE("polynomials travel as ascending coefficient pair arrays") {
    Polynomial p({cplx(1.0, -1.0), cplx(0.0), cplx(2.5, 0.5)});
    json j = to_json(p);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    CHECK(j[0][0].get<double>() == 1.0);
    CHECK(j[0][1].get<double>() == -1.0);
    CHECK(j[2][0].get<double>() == 2.5);
    Polynomial back = polynomial_from_json(j);
    CHECK(back.coeffs() == p.coeffs());

    CHECK(thrown_kind([] { polynomial_from_json(json::array()); }) == errc::parse);
    CHECK(thrown_kind([] { polynomial_from_json(json::parse("[[1]]")); }) == errc::parse);
    CHECK(thrown_kind([] { polynomial_from_json(json::parse("[\"x\"]")); }) == errc::parse);
  }

  TEST_CASE("measures round trip with every density kind") {
    ComplexMeasure nu = mixed_data().nu;
    ComplexMeasure back = measure_from_json(to_json(nu));
    REQUIRE(back.atoms.size() == 2);
    CHECK(back.atoms[0].t == -2.0);
    CHECK(back.atoms[0].w == cplx(0.5, 0.5));
    REQUIRE(back.densities.size() == 3);
    for (double t : {-2.5, -0.3, 0.0, 1.1, 4.0}) {
      check_close(density_value(back, t), density_value(nu, t), 1e-15, "density value");
    }

    json bad_kind = to_json(nu);
    bad_kind["densities"][0]["kind"] = "spline";
    CHECK(thrown_kind([&] { measure_from_json(bad_kind); }) == errc::parse);
    json bad_phase = to_json(nu);
    bad_phase["densities"][1]["phase"] = "tan";
    CHECK(thrown_kind([&] { measure_from_json(bad_phase); }) == errc::parse);
    json bad_list = to_json(nu);
    bad_list["densities"] = 7;
    CHECK(thrown_kind([&] { measure_from_json(bad_list); }) == errc::parse);
  }

  TEST_CASE("data documents round trip and carry the schema tag") {
    DataTriple d = mixed_data();
    json doc = to_json(d);
    CHECK(doc["schema"].get<std::string>() == "qhkit/1");
    DataTriple back = data_from_json(doc);
    CHECK(back.a == d.a);
    CHECK(back.b == d.b);
    qhtest::Rng rng(5);
    for (int k = 0; k < 3; ++k) {
      cplx z = rng.off_axis(0.5);
      check_close(eval(back, z), eval(d, z), 1e-12, "eval after round trip");
    }

    json no_schema = doc;
    no_schema.erase("schema");
    CHECK(thrown_kind([&] { data_from_json(no_schema); }) == errc::parse);
    json wrong_schema = doc;
    wrong_schema["schema"] = "qhkit/2";
    CHECK(thrown_kind([&] { data_from_json(wrong_schema); }) == errc::parse);
    json pair_a = doc;
    pair_a["a"] = json::array({0.0, 1.0});
    CHECK(thrown_kind([&] { data_from_json(pair_a); }) == errc::parse);
  }

  TEST_CASE("disk documents round trip") {
    DiskData e = to_disk(mixed_data());
    json doc = to_json(e);
    CHECK(doc["schema"].get<std::string>() == "qhkit/1");
    DiskData back = disk_from_json(doc);
    CHECK(back.c == e.c);
    CHECK(back.sigma.atom_at_1 == e.sigma.atom_at_1);
    REQUIRE(back.sigma.atoms.size() == e.sigma.atoms.size());
    for (size_t k = 0; k < e.sigma.atoms.size(); ++k) {
      CHECK(back.sigma.atoms[k].angle == e.sigma.atoms[k].angle);
      CHECK(back.sigma.atoms[k].w == e.sigma.atoms[k].w);
    }
    check_close(cauchy_transform(back.sigma, ExtComplex::of(cplx(0.25, -0.1))),
                cauchy_transform(e.sigma, ExtComplex::of(cplx(0.25, -0.1))), 1e-12,
                "cauchy transform after round trip");

    json bad_angle = doc;
    bad_angle["sigma"]["atoms"][0]["angle"] = 0.0;
    CHECK(thrown_kind([&] { disk_from_json(bad_angle); }) == errc::parse);
    json no_sigma = doc;
    no_sigma.erase("sigma");
    CHECK(thrown_kind([&] { disk_from_json(no_sigma); }) == errc::parse);
  }

  TEST_CASE("verdict names are stable strings") {
    CHECK(std::string(verdict_name(ConditionVerdict::satisfied)) == "satisfied");
    CHECK(std::string(verdict_name(ConditionVerdict::violated)) == "violated");
    CHECK(std::string(verdict_name(ConditionVerdict::inconclusive)) == "inconclusive");
    CHECK(std::string(verdict_name(Verdict::accepted)) == "accepted");
    CHECK(std::string(verdict_name(Verdict::rejected)) == "rejected");
    CHECK(std::string(verdict_name(Verdict::inconclusive)) == "inconclusive");
    CHECK(std::string(verdict_name(SumRuleVerdict::identity_holds)) == "identity-holds");
    CHECK(std::string(verdict_name(SumRuleVerdict::diverges)) == "diverges");
    CHECK(std::string(verdict_name(SumRuleVerdict::inconclusive)) == "inconclusive");
  }

  TEST_CASE("report documents expose verdicts, traces, and witnesses") {
    ConditionReport rep;
    rep.verdict = ConditionVerdict::violated;
    rep.witness = cplx(0.0, 2.0);
    rep.trace = {{0.5, 1.25}, {0.25, 2.5}};
    rep.detail = "grows";
    json j = to_json(rep);
    CHECK(j["schema"].get<std::string>() == "qhkit/1");
    CHECK(j["verdict"].get<std::string>() == "violated");
    CHECK(j["witness"]["im"].get<double>() == 2.0);
    REQUIRE(j["trace"].size() == 2);
    CHECK(j["trace"][1][1].get<double>() == 2.5);
    CHECK(j["detail"].get<std::string>() == "grows");

    rep.witness.reset();
    CHECK(to_json(rep)["witness"].is_null());

    SumRuleReport sr;
    sr.verdict = SumRuleVerdict::identity_holds;
    sr.predicted = cplx(-1.0, 0.0);
    sr.table = {{0.2, 0.05, 1.5}};
    sr.inner_limits = {{0.2, 1.49}};
    sr.detail = "matches";
    json js = to_json(sr);
    CHECK(js["verdict"].get<std::string>() == "identity-holds");
    CHECK(js["predicted"]["re"].get<double>() == -1.0);
    CHECK(js["table"][0]["y"].get<double>() == 0.05);
    CHECK(js["inner_limits"][0][1].get<double>() == 1.49);
  }

  TEST_CASE("rational and expansion documents carry their fields") {
    RationalPair pair{parse_rational("z + 3 + 2/z + 1/(z + i)"),
                      parse_rational("z + 3 + 2/z + 2/(z - 2i)")};
    json cls = to_json(classify_pair(pair));
    CHECK(cls["verdict"].get<std::string>() == "accepted");
    CHECK(cls["offending_roots"].is_array());

    json dec = to_json(decompose(pair));
    CHECK(dec["b"]["re"].get<double>() == 1.0);
    CHECK(dec["common"].contains("text"));
    CHECK(dec["upper_part"].contains("num"));

    json fn = to_json(parse_rational("1/(z - i)"));
    CHECK(fn["text"].get<std::string>() == print_rational(parse_rational("1/(z - i)")));

    Expansion e;
    e.at_infinity = true;
    e.order = 1;
    e.coefficients = {cplx(1.0), cplx(3.0), cplx(2.0)};
    e.errors = {1e-12, 1e-11, 1e-10};
    json je = to_json(e);
    CHECK(je["anchor"].get<std::string>() == "infinity");
    CHECK(je["powers"] == json::array({1, 0, -1}));
    CHECK(je["coefficients"][2][0].get<double>() == 2.0);

    Expansion p;
    p.at_infinity = false;
    p.t0 = 0.5;
    p.order = 0;
    p.coefficients = {cplx(0.0, -1.0), cplx(2.0)};
    p.errors = {1e-12, 1e-11};
    json jp = to_json(p);
    CHECK(jp["anchor"].get<double>() == 0.5);
    CHECK(jp["powers"] == json::array({-1, 0}));
  }

  TEST_CASE("recovery documents append the residual to the data") {
    RecoveryReport rec{mixed_data(), 2.5e-4};
    json j = to_json(rec);
    CHECK(j["residual"].get<double>() == 2.5e-4);
    CHECK(j["schema"].get<std::string>() == "qhkit/1");
    DataTriple back = data_from_json(j);
    CHECK(back.b == mixed_data().b);
  }

  TEST_CASE("validate_document recognizes every published shape") {
    validate_document(to_json(mixed_data()));
    validate_document(to_json(to_disk(mixed_data())));
    ConditionReport rep;
    validate_document(to_json(rep));
    Expansion e;
    e.coefficients = {cplx(0.0)};
    e.errors = {0.0};
    validate_document(to_json(e));
    RationalPair pair{parse_rational("-1/z"), parse_rational("-1/z")};
    validate_document(to_json(decompose(pair)));
    validate_document(to_json(RecoveryReport{mixed_data(), 0.0}));

    CHECK(thrown_kind([] { validate_document(json(3.0)); }) == errc::parse);
    CHECK(thrown_kind([] { validate_document(json{{"x", 1}}); }) == errc::parse);
    CHECK(thrown_kind([] {
            validate_document(json{{"schema", "qhkit/1"}, {"x", 1}});
          }) == errc::parse);
    CHECK(thrown_kind([] {
            validate_document(json{{"schema", "qhkit/1"}, {"verdict", "maybe"}});
          }) == errc::parse);
    json bad_data = to_json(mixed_data());
    bad_data["measure"] = json::array();
    CHECK(thrown_kind([&] { validate_document(bad_data); }) == errc::parse);
  }

  TEST_CASE("format_double emits round-trip decimal text") {
    CHECK(format_double(0.0) == "0.0");
    CHECK(format_double(2.0) == "2.0");
    CHECK(format_double(-3.5) == "-3.5");
    CHECK(std::stod(format_double(pi)) == pi);
    CHECK(std::stod(format_double(1.0e-9)) == 1.0e-9);
    CHECK(format_double(1.0e30).find(".0") == std::string::npos);
  }
}
