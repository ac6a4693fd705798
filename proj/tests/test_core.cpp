#include <cmath>

#include "doctest.h"
#include "qhkit/core.hpp"
#include "qhkit/rational.hpp"
#include "test_util.hpp"

using namespace qhkit;
using qhtest::check_close;
using qhtest::thrown_kind;

namespace {
const cplx I(0.0, 1.0);
}

TEST_SUITE("core") {
  TEST_CASE("kernels satisfy the defining identities") {
    check_close(kernel_Ktilde(I, 1.0), I, 1e-15, "Ktilde(i, 1)");
    CHECK(poisson_Q(I, 1.0) == doctest::Approx(0.5));
    CHECK(poisson_P(I, 1.0) == doctest::Approx(0.5));

    qhtest::Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
      cplx z = rng.off_axis();
      double t = rng.uniform(-4.0, 4.0);
      check_close(kernel_Ktilde(z, t), (1.0 + t * t) * kernel_K(z, t), 1e-11,
                  "Ktilde = (1+t^2) K");
      check_close(kernel_K(z, t), 1.0 / (t - z) - t / (1.0 + t * t), 1e-12, "K definition");
      // The symmetric pair of base points cancels for every t.
      check_close(kernel_Ktilde(I, t) + kernel_Ktilde(-I, t), cplx(0.0), 1e-12, "cancellation");
      if (z.imag() > 0.0) {
        CHECK(poisson_P(z, t) == doctest::Approx(std::imag(1.0 / (t - z))).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("evaluation rejects real arguments") {
    auto kind = thrown_kind([] { eval(qhtest::example_54_data(), cplx(0.3, 0.0)); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::domain);
  }

  TEST_CASE("the rational fixture evaluates to its closed form on both half-planes") {
    DataTriple d = qhtest::example_54_data();
    qhtest::Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
      cplx z = rng.off_axis();
      cplx want = qhtest::example_54_value(z);
      cplx got = eval(d, z);
      if (z.imag() > 0.0) {
        CHECK(std::abs(got - want) / std::abs(want) <= 1e-9);
      } else {
        CHECK(std::abs(got) <= 1e-9);
      }
    }
  }

  TEST_CASE("the split exponential data evaluates to e^{iz} above and e^{-iz} below") {
    DataTriple d = qhtest::exp_sym_data();
    for (cplx z : {cplx(0.3, 0.7), cplx(-2.0, 1.5), cplx(4.0, 0.4), cplx(0.0, 3.0),
                   cplx(1.0, -0.6), cplx(-3.5, -2.0)}) {
      check_close(eval(d, z), qhtest::exp_sym_value(z), 2e-8, "split exponential");
    }
  }

  TEST_CASE("builtins evaluate to their defining formulas") {
    CHECK(builtin_names().size() == 8);
    cplx up(0.7, 1.1), dn(-0.4, -0.9);

    check_close(eval_boundary_fn(make_builtin("lin-split"), up), up, 1e-15, "lin-split up");
    check_close(eval_boundary_fn(make_builtin("lin-split"), dn), -dn, 1e-15, "lin-split down");
    check_close(eval_boundary_fn(make_builtin("recip-split"), up), -1.0 / up, 1e-15,
                "recip-split up");
    check_close(eval_boundary_fn(make_builtin("recip-split"), dn), 1.0 / dn, 1e-15,
                "recip-split down");
    check_close(eval_boundary_fn(make_builtin("gauss"), up), std::exp(-up * up), 1e-13, "gauss");
    check_close(eval_boundary_fn(make_builtin("sqrt-up"), up), std::sqrt(up), 1e-15, "sqrt up");
    check_close(eval_boundary_fn(make_builtin("sqrt-up"), dn), cplx(0.0), 0.0, "sqrt below");
    check_close(eval_boundary_fn(make_builtin("exp-sym"), up), std::exp(I * up), 1e-14,
                "exp-sym up");
    check_close(eval_boundary_fn(make_builtin("exp-sym"), dn), std::exp(-I * dn), 1e-14,
                "exp-sym down");
    check_close(eval_boundary_fn(make_builtin("tan-mi"), up), std::tan(up) - I, 1e-13, "tan-mi");
    check_close(eval_boundary_fn(make_builtin("recip-sq"), up), 1.0 / (up * up), 1e-15,
                "recip-sq");
    check_close(eval_boundary_fn(make_builtin("const-i-sym"), up), I, 0.0, "const-i-sym up");
    check_close(eval_boundary_fn(make_builtin("const-i-sym"), dn), -I, 0.0, "const-i-sym down");

    auto kind = thrown_kind([] { make_builtin("no-such-fn"); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::domain);
  }

  TEST_CASE("tan-mi stays finite near poles and saturates far from the axis") {
    cplx near_pole = eval_boundary_fn(make_builtin("tan-mi"), cplx(pi / 2.0, 1e-3));
    CHECK(qhkit::finite(near_pole));
    CHECK(std::abs(near_pole) > 100.0);

    cplx high = eval_boundary_fn(make_builtin("tan-mi"), cplx(13.7, 40.0));
    CHECK(std::abs(high) <= 1e-15);
    cplx low = eval_boundary_fn(make_builtin("tan-mi"), cplx(13.7, -40.0));
    check_close(low, cplx(0.0, -2.0), 1e-15, "saturation below");
  }

  TEST_CASE("piecewise rational sources evaluate per half-plane") {
    PiecewiseRational pr{parse_rational("-1/z"), parse_rational("1/z")};
    check_close(eval_boundary_fn(pr, cplx(0.0, 2.0)), cplx(0.0, 0.5), 1e-15, "upper");
    check_close(eval_boundary_fn(pr, cplx(0.0, -2.0)), cplx(0.0, 0.5), 1e-15, "lower");
    auto kind = thrown_kind([&] { eval_boundary_fn(pr, cplx(1.0, 0.0)); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::domain);
  }

  TEST_CASE("builtin_data is available exactly where a closed-form triple exists") {
    for (const std::string& name : builtin_names()) {
      bool expect = name == "const-i-sym" || name == "exp-sym";
      CHECK(builtin_data(name).has_value() == expect);
    }

    DataTriple ci = *builtin_data("const-i-sym");
    check_close(eval(ci, cplx(0.4, 1.3)), I, 1e-9, "const-i-sym data above");
    check_close(eval(ci, cplx(0.4, -1.3)), -I, 1e-9, "const-i-sym data below");

    DataTriple es = *builtin_data("exp-sym");
    check_close(eval(es, cplx(0.3, 0.7)), qhtest::exp_sym_value(cplx(0.3, 0.7)), 1e-8,
                "exp-sym data");
  }

  TEST_CASE("conjugation swaps half-planes") {
    DataTriple d = qhtest::example_54_data();
    DataTriple dc = conjugate_fn(d);
    qhtest::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      cplx z = rng.off_axis();
      check_close(eval(dc, z), std::conj(eval(d, std::conj(z))), 1e-9, "conjugate identity");
    }
  }

  TEST_CASE("quasi_parts splits into real-symmetric halves that recombine") {
    DataTriple d = qhtest::example_54_data();
    d.a = cplx(0.5, -0.25);
    d.b = cplx(1.0, 2.0);
    auto [re_part, im_part] = quasi_parts(d);
    qhtest::Rng rng(24);
    for (int trial = 0; trial < 8; ++trial) {
      cplx z = rng.off_axis();
      check_close(eval(re_part, z) + I * eval(im_part, z), eval(d, z), 1e-9, "recombination");
      check_close(eval(re_part, std::conj(z)), std::conj(eval(re_part, z)), 1e-9,
                  "real symmetry of the real part");
      check_close(eval(im_part, std::conj(z)), std::conj(eval(im_part, z)), 1e-9,
                  "real symmetry of the imaginary part");
    }
  }

  TEST_CASE("is_ordinary_herglotz accepts nonnegative data and rejects signed or complex data") {
    CHECK(is_ordinary_herglotz({cplx(0.0), cplx(0.0), lambda_tilde()}));
    CHECK(is_ordinary_herglotz({cplx(2.0), cplx(1.5), make_measure({{0.0, cplx(2.0)}}, {})}));
    CHECK(!is_ordinary_herglotz({I, cplx(0.0), empty_measure()}));
    CHECK(!is_ordinary_herglotz({cplx(0.0), -cplx(1.0), empty_measure()}));
    CHECK(!is_ordinary_herglotz({cplx(0.0), cplx(0.0), make_measure({{0.0, cplx(-2.0)}}, {})}));
    CHECK(!is_ordinary_herglotz(qhtest::example_54_data()));
    CHECK(!is_ordinary_herglotz({cplx(0.0), cplx(0.0), lambda_tilde(cplx(0.0, 1.0))}));
  }

  TEST_CASE("linear_combine is linear under evaluation") {
    DataTriple d1 = qhtest::example_54_data();
    DataTriple d2{cplx(1.0, -1.0), cplx(0.5), lambda_tilde()};
    cplx alpha(2.0, 1.0), beta(0.0, -3.0);
    DataTriple combo = linear_combine(alpha, d1, beta, d2);
    qhtest::Rng rng(25);
    for (int trial = 0; trial < 8; ++trial) {
      cplx z = rng.off_axis();
      check_close(eval(combo, z), alpha * eval(d1, z) + beta * eval(d2, z), 1e-8, "linearity");
    }
  }
}
