#include <cmath>

#include "doctest.h"
#include "qhkit/rational.hpp"
#include "qhkit/quadrature.hpp"
#include "qhkit/recover.hpp"
#include "test_util.hpp"

using namespace qhkit;
using qhtest::check_close;
using qhtest::thrown_kind;

namespace {

const cplx I(0.0, 1.0);

DataTriple atom_and_tail_data() {
  DataTriple d;
  d.a = cplx(0.25, -0.5);
  d.b = cplx(0.75);
  d.nu = make_measure({{-1.0, cplx(0.8, -0.3)}}, lambda_tilde(cplx(0.6, 0.1)).densities);
  return d;
}

}  // namespace

TEST_SUITE("recover") {
  TEST_CASE("extrapolated limits converge on smooth data and flag divergence") {
    LimitResult smooth = extrapolate_limit(
        [](double y) { return cplx(2.0, -0.3) + cplx(1.7, 0.2) * y + 0.4 * y * y; }, {});
    CHECK(!smooth.diverged);
    check_close(smooth.value, cplx(2.0, -0.3), 1e-10, "smooth limit");
    CHECK(smooth.error <= 1e-8);

    CHECK(extrapolate_limit([](double y) { return cplx(1.0 / y); }, {}).diverged);
    CHECK(extrapolate_limit([](double y) { return cplx(std::log(1.0 / y)); }, {}).diverged);

    auto bad_r = thrown_kind([] {
      return extrapolate_limit([](double) { return cplx(0.0); }, {0.5, 1.5, 20, 2});
    });
    REQUIRE(bad_r.has_value());
    CHECK(*bad_r == errc::domain);
    auto bad_n = thrown_kind([] {
      return extrapolate_limit([](double) { return cplx(0.0); }, {0.5, 0.5, 2, 2});
    });
    REQUIRE(bad_n.has_value());
    CHECK(*bad_n == errc::domain);
  }

  TEST_CASE("extract_a reads off the constant exactly") {
    DataTriple d{cplx(1.0, 2.0), cplx(3.0, -1.0), lambda_tilde()};
    check_close(extract_a(FromData{d}), cplx(1.0, 2.0), 1e-9, "constant with slope and tail");
    check_close(extract_a(FromData{qhtest::example_54_data()}), cplx(0.0), 1e-9,
                "rational fixture");
    check_close(extract_a(make_builtin("const-i-sym")), cplx(0.0), 1e-12,
                "symmetric constant function");
    check_close(extract_a(make_builtin("exp-sym")), cplx(std::exp(-1.0)), 1e-12,
                "split exponential");
  }

  TEST_CASE("extract_b recovers the slope along the imaginary axis") {
    check_close(extract_b(make_builtin("lin-split")), cplx(1.0), 1e-9, "linear growth");
    check_close(extract_b(make_builtin("recip-split")), cplx(0.0), 1e-9, "decaying function");

    DataTriple d{cplx(0.0), cplx(2.0, -0.5), lambda_tilde()};
    LimitResult detail = extract_b_detail(FromData{d});
    CHECK(!detail.diverged);
    check_close(detail.value, cplx(2.0, -0.5), 1e-8, "complex slope");

    auto kind = thrown_kind([] { extract_b(make_builtin("gauss")); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::convergence);
  }

  TEST_CASE("the two slope extractors agree") {
    DataTriple d = atom_and_tail_data();
    cplx direct = extract_b(FromData{d});
    cplx via_mass = extract_b_via_mass(FromData{d}, d.nu);
    check_close(direct, d.b, 1e-8, "direct slope");
    check_close(via_mass, d.b, 1e-8, "slope via total mass");
    check_close(direct, via_mass, 1e-8, "agreement");
  }

  TEST_CASE("recover_density reproduces the boundary density pointwise") {
    FromData ex54{qhtest::example_54_data()};
    for (double x : {-2.3, -0.4, 0.0, 1.1, 3.7}) {
      cplx want = 1.0 / ((x + I) * (x + I));
      check_close(recover_density(ex54, x), want, 1e-8, "rational fixture density");
    }
    LimitResult detail = recover_density_detail(ex54, 0.7);
    CHECK(!detail.diverged);
    CHECK(detail.error <= 1e-8);

    double t = 1.3;
    check_close(recover_density(make_builtin("exp-sym"), t),
                cplx(std::sin(t) / (1.0 + t * t)), 1e-8, "split exponential density");
  }

  TEST_CASE("recover_atom reads point masses and rejects inconsistent limits") {
    DataTriple d{cplx(0.0), cplx(0.0),
                 make_measure({{1.0, cplx(2.0, 0.5)}}, lambda_tilde().densities)};
    check_close(recover_atom(FromData{d}, 1.0), cplx(2.0, 0.5), 1e-6, "atom weight");
    check_close(recover_atom(FromData{d}, 0.0), cplx(0.0), 1e-8, "no atom at the origin");

    PiecewiseRational mismatched{parse_rational("-1/z"), parse_rational("-2/z")};
    auto kind = thrown_kind([&] { recover_atom(mismatched, 0.0); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::recovery);

    auto diverging = thrown_kind([] { recover_atom(make_builtin("recip-sq"), 0.0); });
    REQUIRE(diverging.has_value());
    CHECK(*diverging == errc::convergence);
  }

  TEST_CASE("higher_order_vanishing isolates stronger poles") {
    check_close(higher_order_vanishing(make_builtin("recip-sq"), 0.0, 2), cplx(1.0), 1e-9,
                "order-two pole strength");
    check_close(higher_order_vanishing(make_builtin("recip-split"), 0.0, 2), cplx(0.0), 1e-9,
                "simple pole vanishes at order two");
    auto kind = thrown_kind([] { higher_order_vanishing(make_builtin("recip-sq"), 0.0, 1); });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::domain);
  }

  TEST_CASE("recover_data round-trips the rational fixture") {
    DataTriple orig = qhtest::example_54_data();
    RecoveryReport rep = recover_data_detail(FromData{orig});
    check_close(rep.data.a, orig.a, 1e-6, "a");
    check_close(rep.data.b, orig.b, 1e-6, "b");
    CHECK(rep.data.nu.atoms.empty());
    CHECK(rep.max_residual <= 5e-3);
    for (double x : {-3.1, -0.8, 0.2, 1.6, 4.4}) {
      check_close(density_value(rep.data.nu, x), density_value(orig.nu, x), 1e-4,
                  "density pointwise");
    }
  }

  TEST_CASE("recover_data keeps true atoms and drops spurious candidates") {
    DataTriple orig = atom_and_tail_data();
    RecoverySpec spec;
    spec.candidate_atoms = {-1.0, 0.5};
    RecoveryReport rep = recover_data_detail(FromData{orig}, spec);
    check_close(rep.data.a, orig.a, 1e-6, "a");
    check_close(rep.data.b, orig.b, 1e-6, "b");
    REQUIRE(rep.data.nu.atoms.size() == 1);
    CHECK(rep.data.nu.atoms[0].t == doctest::Approx(-1.0));
    check_close(rep.data.nu.atoms[0].w, orig.nu.atoms[0].w, 1e-6, "atom weight");
    for (double x : {-4.2, -1.7, 0.9, 2.5}) {
      check_close(density_value(rep.data.nu, x), density_value(orig.nu, x), 1e-4,
                  "density pointwise");
    }
    qhtest::Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
      cplx z = rng.off_axis();
      cplx want = eval(orig, z);
      CHECK(std::abs(eval(rep.data, z) - want) <= 5e-3 * (1.0 + std::abs(want)));
    }
  }

  TEST_CASE("the boundary pairing against 1/(1+x^2) converges to the total mass") {
    DataTriple d = atom_and_tail_data();
    cplx want = mass(d.nu);
    auto pairing = [&](double y) {
      auto integrand = [&](double x) {
        cplx up = eval(d, cplx(x, y));
        cplx lo = eval(d, cplx(x, -y));
        return (up - lo) / (cplx(0.0, 2.0) * (1.0 + x * x));
      };
      QuadratureConfig cfg;
      cfg.abs_tol = 1e-10;
      return integrate_real_line(integrand, {-1.0}, cfg).value;
    };
    LimitResult lim = extrapolate_limit(pairing, {0.25, 0.5, 7, 2});
    CHECK(!lim.diverged);
    check_close(lim.value, want, 1e-5, "pairing limit");
  }

  TEST_CASE("recover_data validates the sampling window") {
    RecoverySpec spec;
    spec.window_lo = 2.0;
    spec.window_hi = -2.0;
    auto kind = thrown_kind([&] {
      recover_data(FromData{qhtest::example_54_data()}, spec);
    });
    REQUIRE(kind.has_value());
    CHECK(*kind == errc::domain);
  }

  TEST_CASE("randomized data round-trips through evaluation and recovery") {
    qhtest::Rng rng(32);
    for (int trial = 0; trial < 5; ++trial) {
      DataTriple orig;
      orig.a = rng.complex_in(-2.0, 2.0, -2.0, 2.0);
      orig.b = rng.complex_in(-1.5, 1.5, -1.5, 1.5);
      double t0 = rng.uniform(-3.0, 3.0);
      cplx w = rng.complex_in(-1.0, 1.0, -1.0, 1.0) + cplx(0.3);
      orig.nu = make_measure({{t0, w}},
                             lambda_tilde(rng.complex_in(0.2, 1.5, -0.5, 0.5)).densities);
      RecoverySpec spec;
      spec.candidate_atoms = {t0};
      DataTriple rec = recover_data(FromData{orig}, spec);
      check_close(rec.a, orig.a, 1e-6, "random a");
      check_close(rec.b, orig.b, 1e-6, "random b");
      REQUIRE(rec.nu.atoms.size() == 1);
      check_close(rec.nu.atoms[0].w, w, 1e-6, "random atom weight");
      for (int k = 0; k < 4; ++k) {
        double x = rng.uniform(-5.0, 5.0);
        if (std::abs(x - t0) < 0.2) continue;
        check_close(density_value(rec.nu, x), density_value(orig.nu, x), 1e-4,
                    "random density pointwise");
      }
    }
  }
}
