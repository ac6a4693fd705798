#include "qhkit/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhkit/quadrature.hpp"

namespace qhkit {

namespace {

std::vector<double> boundary_hints(const BoundaryFn& f) {
  if (const auto* fd = std::get_if<FromData>(&f)) {
    std::vector<double> h = fd->data.nu.peak_hints;
    for (const Atom& a : fd->data.nu.atoms) h.push_back(a.t);
    return h;
  }
  return {};
}

}  // namespace

ConditionReport check_growth(const BoundaryFn& f, const GrowthSampleSpec& spec,
                             const QuadratureConfig& cfg) {
  ConditionReport rep;
  std::vector<double> mhat;
  cplx worst = 0.0;
  // Sample points sit arbitrarily close to the real axis, where tight
  // quadrature tolerances are unattainable; the bound estimate only feeds
  // doubling comparisons, so coarse evaluations are sufficient.
  QuadratureConfig sample_cfg = cfg;
  sample_cfg.abs_tol = std::max(cfg.abs_tol, 1e-8);
  sample_cfg.rel_tol = std::max(cfg.rel_tol, 1e-7);
  for (int ref = 0; ref <= spec.refinements; ++ref) {
    double lo = std::log(spec.r_min) - ref * std::log(10.0);
    double hi = std::log(spec.r_max) + ref * std::log(10.0);
    int radii = spec.radii + 8 * ref;
    double m = 0.0;
    for (int a = 0; a < spec.angles; ++a) {
      double theta = 2.0 * pi * (a + 0.5) / spec.angles;
      for (int k = 0; k < radii; ++k) {
        double radius = std::exp(lo + (hi - lo) * double(k) / double(radii - 1));
        cplx z = radius * cplx(std::cos(theta), std::sin(theta));
        if (z.imag() == 0.0) continue;
        cplx v = eval_boundary_fn(f, z, sample_cfg);
        double av = std::abs(v);
        if (std::isnan(av)) fail(errc::domain, "evaluation returned NaN at a growth sample point");
        if (std::isinf(av)) {
          rep.verdict = ConditionVerdict::violated;
          rep.witness = z;
          rep.detail = "|q| overflows at a sample point, so no growth bound M exists";
          rep.trace.emplace_back(radius, std::numeric_limits<double>::infinity());
          return rep;
        }
        double est = av * std::abs(z.imag()) / (1.0 + std::norm(z));
        if (est > m) {
          m = est;
          worst = z;
        }
      }
    }
    mhat.push_back(m);
    rep.trace.emplace_back(std::exp(hi), m);
  }

  int growing = 0;
  for (size_t k = 1; k < mhat.size(); ++k)
    growing = (mhat[k] >= 2.0 * mhat[k - 1]) ? growing + 1 : 0;
  if (growing >= spec.refinements) {
    rep.verdict = ConditionVerdict::violated;
    rep.witness = worst;
    rep.detail = "the bound estimate doubles with every range refinement";
    return rep;
  }
  double last = mhat.back(), prev = mhat[mhat.size() - 2];
  if (last <= 1.1 * prev + 1e-300) {
    rep.verdict = ConditionVerdict::satisfied;
    rep.detail = "bound estimate stabilized at M = " + format_double(last);
  } else {
    rep.verdict = ConditionVerdict::inconclusive;
    rep.detail = "bound estimate still drifting after all refinements";
  }
  return rep;
}

double regularity_integral(const BoundaryFn& f, double r, const QuadratureConfig& cfg) {
  if (!(r > 0.0) || !(r < 1.0)) fail(errc::domain, "regularity integral requires r in (0,1)");
  QuadratureConfig shell_cfg = cfg;
  shell_cfg.abs_tol = std::max(cfg.abs_tol, 2e-9);
  // Point evaluations just above and below the axis cannot reach the outer
  // tolerances when the evaluation itself needs quadrature near a kernel
  // singularity; 1e-8 accuracy per point is ample for the shell integrals.
  QuadratureConfig eval_cfg = cfg;
  eval_cfg.abs_tol = std::max(cfg.abs_tol, 1e-9);
  eval_cfg.rel_tol = std::max(cfg.rel_tol, 1e-8);
  auto jump = [&](double t) -> cplx {
    cplx up = eval_boundary_fn(f, cplx(t, r), eval_cfg);
    cplx lo = eval_boundary_fn(f, cplx(t, -r), eval_cfg);
    return cplx(std::abs(up - lo) / (1.0 + t * t), 0.0);
  };
  std::vector<double> hints = boundary_hints(f);

  const double cuts[] = {10.0, 100.0, 1000.0, 10000.0};
  double total = 0.0;
  std::vector<double> shells, partials;
  for (size_t s = 0; s < 4; ++s) {
    double shell = 0.0;
    if (s == 0) {
      shell = require_converged(integrate_adaptive(jump, -cuts[0], cuts[0], hints, shell_cfg),
                                "regularity_integral")
                  .real();
    } else {
      shell += require_converged(
                   integrate_adaptive(jump, cuts[s - 1], cuts[s], hints, shell_cfg),
                   "regularity_integral")
                   .real();
      shell += require_converged(
                   integrate_adaptive(jump, -cuts[s], -cuts[s - 1], hints, shell_cfg),
                   "regularity_integral")
                   .real();
    }
    total += shell;
    shells.push_back(shell);
    partials.push_back(total);
  }

  // Remaining-tail estimate from the decay of successive shells.  A tail is
  // trusted either when it is negligible outright or when the last shells
  // shrink by a stable geometric factor, in which case the geometric sum of
  // the remaining shells is added to the total.
  double ratio = shells[2] > 0.0 ? shells[3] / shells[2] : 0.0;
  double tail = ratio < 0.9 ? shells[3] * ratio / (1.0 - ratio)
                            : std::numeric_limits<double>::infinity();
  bool small_tail = tail <= std::max(1e-7 * std::max(1.0, total), 10.0 * cfg.abs_tol);
  bool geometric = false;
  if (!small_tail && ratio > 0.0 && ratio <= 0.6 && shells[1] > 0.0) {
    double prev_ratio = shells[2] / shells[1];
    geometric = std::abs(ratio - prev_ratio) <= 0.1 * ratio;
  }
  if (!(small_tail || geometric)) {
    std::string seq;
    for (size_t s = 0; s < 4; ++s)
      seq += (s ? ", " : "") + format_double(cuts[s]) + " -> " + format_double(partials[s]);
    fail(errc::convergence,
         "truncation sweep does not converge; partial integrals I(T): " + seq);
  }
  return total + tail;
}

ConditionReport check_regularity(const BoundaryFn& f, std::vector<double> r_schedule,
                                 const QuadratureConfig& cfg) {
  if (r_schedule.empty())
    for (int k = 1; k <= 12; ++k) r_schedule.push_back(std::pow(2.0, -k));

  ConditionReport rep;
  std::vector<double> vals;
  int ratio_streak = 0;
  for (double r : r_schedule) {
    double v;
    try {
      v = regularity_integral(f, r, cfg);
    } catch (const error& e) {
      if (e.kind() != errc::convergence) throw;
      rep.verdict = ConditionVerdict::violated;
      rep.witness = cplx(r, 0.0);
      rep.detail = std::string("inner integral diverges at r = ") + format_double(r) + "; " +
                   e.what();
      return rep;
    }
    vals.push_back(v);
    rep.trace.emplace_back(r, v);
    size_t n = vals.size();
    if (n >= 2) {
      ratio_streak = (vals[n - 1] >= 2.0 * vals[n - 2]) ? ratio_streak + 1 : 0;
      if (ratio_streak >= 5) {
        rep.verdict = ConditionVerdict::violated;
        rep.witness = cplx(r, 0.0);
        rep.detail = "integral doubles along five consecutive r halvings";
        return rep;
      }
    }
  }

  // A ratio test alone misses logarithmic growth, where successive increments
  // stay constant instead of the values doubling; test the increments too.
  size_t n = vals.size();
  double sup = *std::max_element(vals.begin(), vals.end());
  if (n >= 6) {
    double inc_scale = 0.0;
    for (size_t k = 1; k < n; ++k) inc_scale = std::max(inc_scale, vals[k] - vals[k - 1]);
    bool steady_growth = inc_scale > 0.01 * (1.0 + sup / 10.0);
    for (size_t k = n - 5; k < n; ++k)
      if (!(vals[k] - vals[k - 1] >= 0.5 * inc_scale)) steady_growth = false;
    if (steady_growth) {
      rep.verdict = ConditionVerdict::violated;
      rep.witness = cplx(r_schedule.back(), 0.0);
      rep.detail = "integral keeps increasing by a fixed amount per r halving "
                   "(logarithmic blow-up)";
      return rep;
    }
  }

  // Accept either increments that are already negligible or increments that
  // shrink by a stable geometric factor per halving, which bounds the limit
  // by the geometric sum of the remaining increments.
  double last_inc = std::abs(vals[n - 1] - vals[n - 2]);
  bool settled = last_inc <= std::max(1e-6, 1e-3 * sup);
  if (!settled && n >= 4) {
    double i1 = std::abs(vals[n - 3] - vals[n - 4]);
    double i2 = std::abs(vals[n - 2] - vals[n - 3]);
    if (i1 > 0.0 && i2 > 0.0) {
      double r2 = i2 / i1, r3 = last_inc / i2;
      settled = r2 <= 0.9 && r3 <= 0.9 && std::abs(r3 - r2) <= 0.25 * std::max(r2, r3);
    }
  }
  if (settled) {
    rep.verdict = ConditionVerdict::satisfied;
    rep.detail = "integral bounded over the schedule; sup = " + format_double(sup);
  } else {
    rep.verdict = ConditionVerdict::inconclusive;
    rep.detail = "integral neither stabilizes nor shows sustained growth over the schedule";
  }
  return rep;
}

ConditionReport is_quasi_herglotz(const BoundaryFn& f, const QuadratureConfig& cfg) {
  ConditionReport growth = check_growth(f, {}, cfg);
  if (growth.verdict == ConditionVerdict::violated) {
    growth.detail = "growth condition violated: " + growth.detail;
    return growth;
  }
  ConditionReport reg = check_regularity(f, {}, cfg);
  ConditionReport rep;
  rep.trace = growth.trace;
  rep.trace.insert(rep.trace.end(), reg.trace.begin(), reg.trace.end());
  if (reg.verdict == ConditionVerdict::violated) {
    rep.verdict = ConditionVerdict::violated;
    rep.witness = reg.witness;
    rep.detail = "regularity condition violated: " + reg.detail;
  } else if (growth.verdict == ConditionVerdict::satisfied &&
             reg.verdict == ConditionVerdict::satisfied) {
    rep.verdict = ConditionVerdict::satisfied;
    rep.detail = "growth: " + growth.detail + "; regularity: " + reg.detail;
  } else {
    rep.verdict = ConditionVerdict::inconclusive;
    rep.detail = "growth: " + growth.detail + "; regularity: " + reg.detail;
  }
  return rep;
}

ConditionReport check_real_symmetry(const BoundaryFn& f, std::vector<cplx> grid,
                                    const QuadratureConfig& cfg) {
  if (grid.empty()) {
    for (double re : {-3.0, -1.5, -0.4, 0.6, 1.8, 2.9})
      for (double im : {0.3, 0.9, 2.1}) grid.push_back(cplx(re, im));
  }
  ConditionReport rep;
  double worst = 0.0;
  for (cplx z : grid) {
    cplx v = eval_boundary_fn(f, z, cfg);
    cplx mirrored = std::conj(eval_boundary_fn(f, std::conj(z), cfg));
    double d = std::abs(v - mirrored);
    rep.trace.emplace_back(z.real(), d);
    if (d > worst) {
      worst = d;
      rep.witness = z;
    }
    if (d > 1e-8 * (1.0 + std::abs(v))) {
      rep.verdict = ConditionVerdict::violated;
      rep.detail = "q(z) != conj(q(conj z)); difference " + format_double(d);
      return rep;
    }
  }
  rep.verdict = ConditionVerdict::satisfied;
  rep.witness.reset();
  rep.detail = "symmetry holds on the grid; max difference " + format_double(worst);
  return rep;
}

namespace {

ConditionReport check_zero_half(const DataTriple& d, std::vector<cplx> grid, int zero_side,
                                const QuadratureConfig& cfg) {
  if (grid.empty()) {
    for (double re : {-3.2, -1.1, 0.2, 1.7, 2.8})
      for (double im : {0.35, 0.8, 1.6, 3.1, 6.4}) grid.push_back(cplx(re, zero_side * im));
  }
  ConditionReport rep;

  double b_scale = 1.0 + std::abs(d.b);
  if (std::abs(d.b) > 1e-12 * b_scale) {
    rep.verdict = ConditionVerdict::violated;
    rep.witness = d.b;
    rep.detail = "b != 0";
    return rep;
  }

  cplx m = mass(d.nu, cfg);
  cplx a_expect = cplx(0.0, double(-zero_side)) * m / pi;
  double a_err = std::abs(d.a - a_expect);
  rep.trace.emplace_back(0.0, a_err);
  double a_tol = 1e-8 * (1.0 + std::abs(d.a) + std::abs(m) / pi);
  if (a_err > a_tol) {
    if (a_err <= 10.0 * a_tol) {
      rep.verdict = ConditionVerdict::inconclusive;
      rep.detail = "a is borderline against the mass condition; |a - expected| = " +
                   format_double(a_err);
      return rep;
    }
    rep.verdict = ConditionVerdict::violated;
    rep.witness = d.a;
    rep.detail = (zero_side < 0 ? "a != (i/pi) * total mass" : "a != -(i/pi) * total mass");
    return rep;
  }

  // Vanishing of the moment integral on the claimed-zero half-plane; the
  // kernel carries (t -/+ i) so the atom and density contributions of a
  // genuinely one-sided function cancel identically.
  Polynomial knum({cplx(0.0, double(zero_side)), cplx(1.0)});
  double worst = 0.0;
  for (cplx z : grid) {
    Polynomial kden({-z, cplx(1.0)});
    cplx v = integrate_kernel_rational(d.nu, knum, kden, cfg);
    double av = std::abs(v);
    rep.trace.emplace_back(z.real(), av);
    if (av > worst) {
      worst = av;
      rep.witness = z;
    }
  }
  double g_tol = 1e-7 * (1.0 + std::abs(m));
  if (worst > 10.0 * g_tol) {
    rep.verdict = ConditionVerdict::violated;
    rep.detail = "moment integral does not vanish on the half-plane; max |integral| = " +
                 format_double(worst);
    return rep;
  }
  if (worst > g_tol) {
    rep.verdict = ConditionVerdict::inconclusive;
    rep.detail = "moment integral is borderline; max |integral| = " + format_double(worst);
    return rep;
  }
  rep.verdict = ConditionVerdict::satisfied;
  rep.witness.reset();
  rep.detail = "b = 0, a matches the mass condition, moment integral vanishes; max residual " +
               format_double(std::max(worst, a_err));
  return rep;
}

}  // namespace

ConditionReport check_zero_lower(const DataTriple& d, std::vector<cplx> grid,
                                 const QuadratureConfig& cfg) {
  return check_zero_half(d, std::move(grid), -1, cfg);
}

ConditionReport check_zero_upper(const DataTriple& d, std::vector<cplx> grid,
                                 const QuadratureConfig& cfg) {
  return check_zero_half(d, std::move(grid), +1, cfg);
}

ConditionReport check_signed_zero_props(const DataTriple& d, const QuadratureConfig& cfg) {
  ConditionReport rep;
  cplx m = mass(d.nu, cfg);
  double tol = 1e-8 * (1.0 + std::abs(d.a));

  bool a_zero = std::abs(d.a) <= tol;
  bool mass_zero = std::abs(m) <= pi * tol;
  rep.trace.emplace_back(std::abs(d.a), std::abs(m));
  if (a_zero != mass_zero) {
    rep.verdict = ConditionVerdict::violated;
    rep.witness = m;
    rep.detail = a_zero ? "a = 0 but the measure has nonzero total mass"
                        : "the measure has zero total mass but a != 0";
    return rep;
  }

  auto [re_nu, im_nu] = real_imag_parts(d.nu);
  bool signed_measure = im_nu.atoms.empty() && im_nu.densities.empty();
  if (!signed_measure) {
    double im_tv = total_variation(im_nu, cfg);
    signed_measure = im_tv <= 1e-10 * (1.0 + total_variation(re_nu, cfg));
  }

  if (signed_measure) {
    double re_tv = total_variation(re_nu, cfg);
    if (re_tv > 1e-8 && a_zero) {
      rep.verdict = ConditionVerdict::violated;
      rep.witness = d.a;
      rep.detail = "a signed nonzero measure requires a != 0";
      return rep;
    }
    if (std::abs(d.a.real()) > tol) {
      rep.verdict = ConditionVerdict::violated;
      rep.witness = d.a;
      rep.detail = "a signed measure requires Re a = 0";
      return rep;
    }
    // nu must equal +/-Im[a] * lambda-tilde, the sign set by which half-plane
    // carries the zero: no atoms, density +/-Im[a]/(1+t^2). The report does
    // not know the certified side, so either orientation is accepted.
    double ia = d.a.imag();
    for (const Atom& at : d.nu.atoms) {
      if (std::abs(at.w) > 1e-10) {
        rep.verdict = ConditionVerdict::violated;
        rep.witness = cplx(at.t, 0.0);
        rep.detail = "a signed measure for a one-sided function cannot carry point masses";
        return rep;
      }
    }
    double worst_pos = 0.0, worst_neg = 0.0;
    auto probe = [&](double t) {
      cplx got = density_value(d.nu, t);
      worst_pos = std::max(worst_pos, std::abs(got - ia / (1.0 + t * t)));
      worst_neg = std::max(worst_neg, std::abs(got + ia / (1.0 + t * t)));
    };
    for (int k = 0; k <= 60; ++k) probe(-15.0 + 0.5 * double(k));
    for (double t : {40.0, 250.0, 1600.0}) probe(t);
    double worst = std::min(worst_pos, worst_neg);
    rep.trace.emplace_back(1.0, worst);
    if (worst > 1e-7 * (1.0 + std::abs(ia))) {
      rep.verdict = ConditionVerdict::violated;
      rep.witness = cplx(0.0, ia);
      rep.detail = "signed measure is not the expected multiple of dt/(1+t^2); max density "
                   "difference " +
                   format_double(worst);
      return rep;
    }
  }

  rep.verdict = ConditionVerdict::satisfied;
  rep.detail = signed_measure
                   ? "mass/support consequences hold; measure is the expected multiple of "
                     "dt/(1+t^2)"
                   : "mass consequence holds for the complex measure";
  return rep;
}

}  // namespace qhkit
