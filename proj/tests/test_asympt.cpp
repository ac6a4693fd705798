#include <cmath>
#include <vector>

#include "doctest.h"
#include "qhkit/asympt.hpp"
#include "qhkit/rational.hpp"
#include "test_util.hpp"

using namespace qhkit;
using qhtest::check_close;
using qhtest::thrown_kind;

namespace {

const cplx I(0.0, 1.0);

BoundaryFn same_both_halves(const std::string& expr) {
  RationalFn f = parse_rational(expr);
  return PiecewiseRational{f, f};
}

DataTriple atom_and_tail_data() {
  return {cplx(0.25, -0.5), cplx(0.75),
          make_measure({{-1.0, cplx(0.8, -0.3)}}, lambda_tilde(cplx(0.6, 0.1)).densities)};
}

// integral of y/(x^2+y^2) over eps < |x| < 1/eps.
double annulus_poisson(double eps, double y) {
  return 2.0 * (std::atan(1.0 / (eps * y)) - std::atan(eps / y));
}

}  // namespace

TEST_SUITE("asympt") {
  TEST_CASE("expansion at infinity recovers Laurent coefficients") {
    Expansion e = expand_at_infinity(same_both_halves("z + 3 + 2/z"), 1);
    CHECK(e.at_infinity);
    CHECK(e.order == 1);
    CHECK_FALSE(e.truncated);
    CHECK(e.first_power() == 1);
    REQUIRE(e.coefficients.size() == 3);
    CHECK(e.errors.size() == 3);
    check_close(coefficient(e, 1), cplx(1.0), 1e-8, "b(1)");
    check_close(coefficient(e, 0), cplx(3.0), 1e-8, "b(0)");
    check_close(coefficient(e, -1), cplx(2.0), 1e-8, "b(-1)");
    CHECK(coefficient(e, 2) == cplx(0.0));
    CHECK(coefficient(e, -2) == cplx(0.0));

    Expansion pole = expand_at_infinity(same_both_halves("-1/z"), 1);
    check_close(coefficient(pole, 1), cplx(0.0), 1e-9, "b(1)");
    check_close(coefficient(pole, 0), cplx(0.0), 1e-9, "b(0)");
    check_close(coefficient(pole, -1), cplx(-1.0), 1e-8, "b(-1)");

    Expansion flat = expand_at_infinity(make_builtin("tan-mi"), 0);
    check_close(coefficient(flat, 1), cplx(0.0), 1e-9, "b(1)");
    check_close(coefficient(flat, 0), cplx(0.0), 1e-9, "b(0)");
  }

  TEST_CASE("expansion at a point recovers Taylor data and residues") {
    Expansion e = expand_at_point(make_builtin("exp-sym"), 0.0, 1);
    CHECK_FALSE(e.at_infinity);
    CHECK(e.first_power() == -1);
    check_close(coefficient(e, -1), cplx(0.0), 1e-9, "a(-1)");
    check_close(coefficient(e, 0), cplx(1.0), 1e-8, "a(0)");
    check_close(coefficient(e, 1), I, 1e-7, "a(1)");

    Expansion res = expand_at_point(same_both_halves("z + 3 + 2/z"), 0.0, 0);
    check_close(coefficient(res, -1), cplx(2.0), 1e-8, "a(-1)");
    check_close(coefficient(res, 0), cplx(3.0), 1e-7, "a(0)");
  }

  TEST_CASE("expansion coefficients match the generating data") {
    DataTriple d = atom_and_tail_data();
    LimitSchedule sched{0.25, 0.5, 12, 2};
    Expansion inf = expand_at_infinity(FromData{d}, 0, sched);
    check_close(coefficient(inf, 1), d.b, 1e-8, "b(1) equals the linear term");

    Expansion at_atom = expand_at_point(FromData{d}, -1.0, -1, sched);
    CHECK(at_atom.order == -1);
    REQUIRE(at_atom.coefficients.size() == 1);
    cplx expected = -2.0 * cplx(0.8, -0.3) / pi;
    check_close(coefficient(at_atom, -1), expected, 1e-7,
                "the residue carries the rescaled atom weight");
  }

  TEST_CASE("expansion stops where the function loses analyticity") {
    Expansion e = expand_at_point(make_builtin("sqrt-up"), 0.0, 2);
    CHECK(e.truncated);
    CHECK(e.order == 0);
    REQUIRE(e.coefficients.size() == 2);
    check_close(coefficient(e, -1), cplx(0.0), 1e-9, "a(-1)");
    check_close(coefficient(e, 0), cplx(0.0), 5e-3, "a(0) converges only at the sqrt rate");

    CHECK(thrown_kind([] { expand_at_point(make_builtin("recip-sq"), 0.0, 1); }) ==
          errc::convergence);
    CHECK(thrown_kind([] { expand_at_infinity(make_builtin("lin-split"), -2); }) ==
          errc::domain);
    double inf_t0 = std::numeric_limits<double>::infinity();
    CHECK(thrown_kind([&] { expand_at_point(make_builtin("gauss"), inf_t0, 0); }) ==
          errc::domain);
  }

  TEST_CASE("moment integrals over the shrinking annulus match closed forms") {
    BoundaryFn pole = same_both_halves("-1/z");
    for (auto [eps, y] : {std::pair{0.2, 0.05}, {0.1, 0.02}, {0.05, 0.01}}) {
      CHECK(sum_rule_integral(pole, 0, eps, y) ==
            doctest::Approx(annulus_poisson(eps, y)).epsilon(1e-9));
      CHECK(sum_rule_integral(pole, 1, eps, y) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
      double second = y * 2.0 * (1.0 / eps - eps) - y * y * annulus_poisson(eps, y);
      CHECK(sum_rule_integral(pole, 2, eps, y) == doctest::Approx(second).epsilon(1e-9));
    }

    CHECK(thrown_kind([&] { sum_rule_integral(pole, -1, 0.1, 0.05); }) == errc::domain);
    CHECK(thrown_kind([&] { sum_rule_integral(pole, 0, 1.5, 0.05); }) == errc::domain);
    CHECK(thrown_kind([&] { sum_rule_integral(pole, 0, 0.1, 5e-5); }) == errc::domain);
  }

  TEST_CASE("moment integrals resolve the tangent pole train") {
    BoundaryFn f = make_builtin("tan-mi");
    CHECK(sum_rule_integral(f, 0, 0.2, 0.05) ==
          doctest::Approx(2.6115045557583265).epsilon(1e-6));
    CHECK(sum_rule_integral(f, 0, 0.2, 0.01) ==
          doctest::Approx(2.8947342423308538).epsilon(1e-6));
    CHECK(sum_rule_integral(f, 0, 0.1, 0.05) ==
          doctest::Approx(-0.8957096439719573).epsilon(1e-6));
    CHECK(sum_rule_integral(f, 0, 0.1, 0.01) ==
          doctest::Approx(-0.9394841016955815).epsilon(1e-6));
  }

  TEST_CASE("sum rule verdicts") {
    BoundaryFn pole = same_both_halves("-1/z");
    Expansion anchor = expand_at_point(pole, 0.0, 0);
    Expansion inf = expand_at_infinity(pole, 1);
    SumRuleReport ok = sum_rule_check(pole, 0, anchor, inf);
    CHECK(ok.verdict == SumRuleVerdict::identity_holds);
    check_close(ok.predicted, cplx(0.0), 1e-8, "predicted");
    CHECK(ok.inner_limits.size() == 4);
    CHECK(std::abs(ok.inner_limits.back().second) <= 1e-4);
    CHECK_FALSE(ok.table.empty());

    BoundaryFn wall = make_builtin("const-i-sym");
    SumRuleReport grows = sum_rule_check(wall, 0, expand_at_point(wall, 0.0, 0),
                                         expand_at_infinity(wall, 1));
    CHECK(grows.verdict == SumRuleVerdict::diverges);
  }

  TEST_CASE("sum rule oscillation stays inconclusive") {
    BoundaryFn f = make_builtin("tan-mi");
    Expansion anchor = expand_at_point(f, 0.0, 0);
    Expansion inf = expand_at_infinity(f, 1);
    SumRuleReport rep =
        sum_rule_check(f, 0, anchor, inf, {0.2, 0.1, 0.05, 0.02}, {0.05, 0.025, 0.0125});
    CHECK(rep.verdict == SumRuleVerdict::inconclusive);
    check_close(rep.predicted, cplx(0.0), 1e-7, "predicted");
  }

  TEST_CASE("sum rule rejects mismatched expansions") {
    BoundaryFn pole = same_both_halves("-1/z");
    Expansion anchor = expand_at_point(pole, 0.0, 0);
    Expansion inf = expand_at_infinity(pole, 1);
    CHECK(thrown_kind([&] { sum_rule_check(pole, 0, inf, inf); }) == errc::domain);
    CHECK(thrown_kind([&] { sum_rule_check(pole, 0, anchor, anchor); }) == errc::domain);
    Expansion off = expand_at_point(same_both_halves("1/(1 + z^2)"), 1.0, 0);
    CHECK(thrown_kind([&] { sum_rule_check(pole, 0, off, inf); }) == errc::domain);
    CHECK(thrown_kind([&] {
            sum_rule_check(pole, 0, anchor, inf, {0.2, 1.2});
          }) == errc::domain);
  }
}
