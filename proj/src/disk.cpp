#include "qhkit/disk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "qhkit/quadrature.hpp"
#include "qhkit/rational_fn.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

namespace {

const Polynomial kTPlusI({cplx(0.0, 1.0), cplx(1.0)});            // t + i
const Polynomial kTPlusISq = kTPlusI * kTPlusI;                   // (t + i)^2
const Polynomial kOnePlusTSq({cplx(1.0), cplx(0.0), cplx(1.0)});  // 1 + t^2

double normalized_angle(cplx zeta) {
  double s = std::arg(zeta);
  if (s <= 0.0) s += 2.0 * pi;
  return s;
}

// Wraps the t-parametrized circle densities as a line measure so the shared
// rational quadrature engines apply. Gap 0: the arc-length element 2/(1+t^2)
// is folded into every kernel built here.
ComplexMeasure circle_line_measure(const CircleMeasure& sigma) {
  return make_measure({}, sigma.densities, 0);
}

DensityComponent scale_density(const DensityComponent& comp, const Polynomial& num_factor,
                               const Polynomial& den_factor, cplx scalar) {
  if (const auto* r = std::get_if<RationalDensity>(&comp)) {
    RationalFn red(r->num * num_factor * scalar, r->den * den_factor);
    return RationalDensity{red.num(), red.den()};
  }
  if (const auto* tr = std::get_if<TrigRationalDensity>(&comp)) {
    RationalFn red(tr->num * num_factor * scalar, tr->den * den_factor);
    return TrigRationalDensity{tr->phase, tr->omega, red.num(), red.den()};
  }
  const auto& b = std::get<BumpDensity>(comp);
  RationalFn red(b.num * num_factor * scalar, b.den * den_factor);
  return BumpDensity{b.lo, b.hi, red.num(), red.den()};
}

}  // namespace

cplx cayley(const ExtComplex& zeta) {
  if (zeta.is_infinity) return cplx(0.0, -1.0);
  if (zeta.value == cplx(1.0)) {
    fail(errc::domain, "cayley is undefined at 1: the image is the point at infinity");
  }
  cplx v = cplx(0.0, 1.0) * (cplx(1.0) + zeta.value) / (cplx(1.0) - zeta.value);
  if (!finite(v)) fail(errc::domain, "cayley overflowed near the excluded point 1");
  return v;
}

cplx inverse_cayley(const ExtComplex& xi) {
  if (xi.is_infinity) return cplx(1.0);
  if (xi.value == cplx(0.0, -1.0)) {
    fail(errc::domain, "inverse_cayley is undefined at -i: the image is the point at infinity");
  }
  cplx v = (xi.value - cplx(0.0, 1.0)) / (xi.value + cplx(0.0, 1.0));
  if (!finite(v)) fail(errc::domain, "inverse_cayley overflowed near the excluded point -i");
  return v;
}

cplx cauchy_transform(const CircleMeasure& sigma, const ExtComplex& tau,
                      const QuadratureConfig& cfg) {
  if (tau.is_infinity) return cplx(0.0);
  cplx t = tau.value;
  if (std::abs(std::abs(t) - 1.0) <= 1e-12) {
    fail(errc::domain, "cauchy_transform is undefined on the unit circle");
  }
  const cplx i(0.0, 1.0);
  cplx total = i * sigma.atom_at_1 / (cplx(1.0) - t);
  for (const auto& atom : sigma.atoms) {
    cplx phase(std::cos(atom.angle), std::sin(atom.angle));
    cplx den = cplx(1.0) - std::conj(phase) * t;
    if (std::abs(den) < 1e-300) fail(errc::domain, "cauchy_transform pole at a circle atom");
    total += i * atom.w * phase / den;
  }
  if (!sigma.densities.empty()) {
    // Substituting zeta = (u - i)/(u + i) into e^{is}/(1 - e^{-is} tau) and
    // folding in the arc-length element 2/(1+u^2) gives the rational kernel
    // 2(u - i) / ((u + i)^2 ((1 - tau) u - i (1 + tau))).
    ComplexMeasure line = circle_line_measure(sigma);
    Polynomial knum({cplx(0.0, -2.0), cplx(2.0)});
    Polynomial kden = kTPlusISq * Polynomial({-i * (cplx(1.0) + t), cplx(1.0) - t});
    total += i * integrate_kernel_rational(line, knum, kden, cfg);
  }
  if (!finite(total)) fail(errc::quadrature, "cauchy_transform produced a non-finite value");
  return total;
}

DiskData to_disk(const DataTriple& d, const QuadratureConfig& cfg) {
  const cplx i(0.0, 1.0);
  DiskData out;
  out.c = d.a - i * (d.b + mass(d.nu, cfg) / pi);
  out.sigma.atom_at_1 = 2.0 * d.b;
  for (const auto& atom : d.nu.atoms) {
    cplx zeta = inverse_cayley(ExtComplex::of(cplx(atom.t)));
    double s = normalized_angle(zeta);
    cplx tpi(atom.t, 1.0);
    cplx w = (2.0 / pi) * tpi * tpi * atom.w / (1.0 + atom.t * atom.t);
    out.sigma.atoms.push_back({s, w});
  }
  std::sort(out.sigma.atoms.begin(), out.sigma.atoms.end(),
            [](const CircleAtom& x, const CircleAtom& y) { return x.angle < y.angle; });
  for (const auto& comp : d.nu.densities) {
    out.sigma.densities.push_back(
        scale_density(comp, kTPlusISq, Polynomial::constant(1.0), cplx(1.0 / pi)));
  }
  if (!out.sigma.densities.empty()) circle_line_measure(out.sigma);
  return out;
}

DataTriple from_disk(const DiskData& e, const QuadratureConfig& cfg) {
  const cplx i(0.0, 1.0);
  DataTriple out;
  out.b = e.sigma.atom_at_1 / 2.0;
  std::vector<Atom> atoms;
  for (const auto& atom : e.sigma.atoms) {
    if (!(atom.angle > 0.0 && atom.angle < 2.0 * pi)) {
      fail(errc::domain, "circle atom angle must lie strictly between 0 and 2*pi");
    }
    double t = -1.0 / std::tan(atom.angle / 2.0);
    if (!std::isfinite(t)) fail(errc::domain, "circle atom angle maps outside the real line");
    cplx tpi(t, 1.0);
    cplx w = pi * atom.w * (tpi - 2.0 * i) / (2.0 * tpi);
    atoms.push_back({t, w});
  }
  std::vector<DensityComponent> densities;
  densities.reserve(e.sigma.densities.size());
  for (const auto& comp : e.sigma.densities) {
    densities.push_back(scale_density(comp, Polynomial::constant(1.0), kTPlusISq, cplx(pi)));
  }
  out.nu = make_measure(std::move(atoms), std::move(densities));
  out.a = e.c + i * (out.b + mass(out.nu, cfg) / pi);

  double worst = 0.0;
  for (double im : {0.6, 1.9, -0.6, -1.9}) {
    for (double re : {-3.4, -1.2, 0.3, 1.5, 2.9}) {
      cplx z(re, im);
      cplx lhs = eval(out, z, cfg);
      cplx rhs = e.c + cauchy_transform(e.sigma, ExtComplex::of(inverse_cayley(ExtComplex::of(z))), cfg);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  if (worst > 1e-7) {
    std::ostringstream msg;
    msg << "recovered half-plane data fails the disk identity on the validation grid "
        << "(relative residual " << worst << ")";
    fail(errc::recovery, msg.str());
  }
  return out;
}

ConditionReport identity_check(const DataTriple& d, std::vector<cplx> grid,
                               const QuadratureConfig& cfg) {
  if (grid.empty()) {
    for (double im : {0.5, 1.7, 3.0, -0.5, -1.7}) {
      for (int k = 0; k < 10; ++k) grid.emplace_back(-4.5 + 1.0 * k, im);
    }
  }
  DiskData disk = to_disk(d, cfg);
  ConditionReport report;
  double worst = 0.0;
  double scale = 1.0;
  for (cplx z : grid) {
    if (z.imag() == 0.0) fail(errc::domain, "identity_check grid points must avoid the real axis");
    cplx direct = eval(d, z, cfg);
    cplx via_disk =
        disk.c + cauchy_transform(disk.sigma, ExtComplex::of(inverse_cayley(ExtComplex::of(z))), cfg);
    double resid = std::abs(direct - via_disk);
    report.trace.emplace_back(z.real(), resid);
    scale = std::max(scale, std::abs(direct));
    if (resid > worst) {
      worst = resid;
      report.witness = z;
    }
  }
  std::ostringstream msg;
  msg << "max |q(z) - c - C sigma(phi(z))| = " << worst << " over " << grid.size() << " points";
  report.detail = msg.str();
  if (worst <= 1e-8 * scale) {
    report.verdict = ConditionVerdict::satisfied;
    report.witness.reset();
  } else if (worst > 1e-6 * scale) {
    report.verdict = ConditionVerdict::violated;
  } else {
    report.verdict = ConditionVerdict::inconclusive;
  }
  return report;
}

double circle_total_variation(const CircleMeasure& sigma, const QuadratureConfig& cfg) {
  double total = std::abs(sigma.atom_at_1);
  for (const auto& atom : sigma.atoms) total += std::abs(atom.w);
  for (const auto& comp : sigma.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&comp)) {
      auto q = tv_rational(r->num * 2.0, r->den * kOnePlusTSq, near_real_peaks(r->den), cfg);
      total += require_converged(q, "circle density total variation").real();
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&comp)) {
      auto q = tv_trig_rational(tr->phase, tr->omega, tr->num * 2.0, tr->den * kOnePlusTSq,
                                near_real_peaks(tr->den), cfg);
      total += require_converged(q, "circle density total variation").real();
    } else {
      const auto& b = std::get<BumpDensity>(comp);
      auto f = [&](double t) {
        return cplx(std::abs(b.num(cplx(t)) / b.den(cplx(t))) * 2.0 / (1.0 + t * t));
      };
      auto q = integrate_adaptive(f, b.lo, b.hi, {}, cfg);
      total += require_converged(q, "circle density total variation").real();
    }
  }
  return total;
}

}  // namespace qhkit
