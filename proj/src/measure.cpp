#include "qhkit/measure.hpp"

#include <algorithm>
#include <cmath>

#include "qhkit/quadrature.hpp"

namespace qhkit {

namespace {

bool is_real_root(const RootCluster& r) {
  return std::abs(r.value.imag()) <= 1e-9 * (1.0 + std::abs(r.value));
}

void validate_line_rational(const Polynomial& num, const Polynomial& den, int min_gap,
                            std::vector<double>& hints) {
  if (den.is_zero()) fail(errc::domain, "density denominator is the zero polynomial");
  if (num.is_zero()) return;
  if (den.degree() - num.degree() < min_gap)
    fail(errc::domain, "density degree gap too small for a finite measure");
  if (den.degree() >= 1) {
    for (const RootCluster& r : roots(den)) {
      if (is_real_root(r)) fail(errc::domain, "density denominator has a real zero");
      if (std::abs(r.value.imag()) < 0.5) hints.push_back(r.value.real());
    }
  }
}

void validate_bump(const BumpDensity& d, std::vector<double>& hints) {
  if (!(d.lo < d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi))
    fail(errc::domain, "bump support interval is not a finite [lo, hi] with lo < hi");
  if (d.den.is_zero()) fail(errc::domain, "density denominator is the zero polynomial");
  if (d.num.is_zero()) return;
  if (d.den.degree() >= 1) {
    for (const RootCluster& r : roots(d.den)) {
      double s = 1.0 + std::abs(r.value);
      if (is_real_root(r) && r.value.real() >= d.lo - 1e-9 * s &&
          r.value.real() <= d.hi + 1e-9 * s)
        fail(errc::domain, "bump denominator vanishes on the support interval");
      if (std::abs(r.value.imag()) < 0.5 && r.value.real() > d.lo - 1.0 &&
          r.value.real() < d.hi + 1.0)
        hints.push_back(r.value.real());
    }
  }
}

bool density_is_zero(const DensityComponent& d) {
  return std::visit([](const auto& c) { return c.num.is_zero(); }, d);
}

cplx simple_rational_value(const Polynomial& num, const Polynomial& den, double t) {
  return num(t) / den(t);
}

}  // namespace

ComplexMeasure make_measure(std::vector<Atom> atoms, std::vector<DensityComponent> densities,
                            int min_degree_gap) {
  ComplexMeasure m;

  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.t < y.t; });
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.t) || !finite(a.w)) fail(errc::domain, "atom with non-finite data");
    if (!m.atoms.empty() && same_atom_location(m.atoms.back().t, a.t))
      m.atoms.back().w += a.w;
    else
      m.atoms.push_back(a);
  }
  std::erase_if(m.atoms, [](const Atom& a) { return std::abs(a.w) < 1e-300; });

  for (DensityComponent& d : densities) {
    if (density_is_zero(d)) continue;
    if (auto* r = std::get_if<RationalDensity>(&d)) {
      validate_line_rational(r->num, r->den, min_degree_gap, m.peak_hints);
    } else if (auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      if (!std::isfinite(tr->omega)) fail(errc::domain, "oscillation frequency is not finite");
      validate_line_rational(tr->num, tr->den, min_degree_gap, m.peak_hints);
    } else {
      validate_bump(std::get<BumpDensity>(d), m.peak_hints);
    }
    m.densities.push_back(std::move(d));
  }
  std::sort(m.peak_hints.begin(), m.peak_hints.end());
  m.peak_hints.erase(std::unique(m.peak_hints.begin(), m.peak_hints.end()), m.peak_hints.end());
  return m;
}

ComplexMeasure empty_measure() { return {}; }

ComplexMeasure lambda_tilde(cplx scale) {
  RationalDensity d{Polynomial({scale}), Polynomial({cplx(1.0), cplx(0.0), cplx(1.0)})};
  return make_measure({}, {d});
}

cplx density_value(const ComplexMeasure& nu, double t) {
  cplx v = 0.0;
  for (const DensityComponent& d : nu.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&d)) {
      v += simple_rational_value(r->num, r->den, t);
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      double osc = tr->phase == TrigPhase::sin ? std::sin(tr->omega * t) : std::cos(tr->omega * t);
      v += osc * simple_rational_value(tr->num, tr->den, t);
    } else {
      const auto& b = std::get<BumpDensity>(d);
      // Half-open support, so bumps tiling an interval count shared
      // endpoints exactly once.
      if (t >= b.lo && t < b.hi) v += simple_rational_value(b.num, b.den, t);
    }
  }
  return v;
}

double total_variation(const ComplexMeasure& nu, const QuadratureConfig& cfg) {
  double tv = 0.0;
  for (const Atom& a : nu.atoms) tv += std::abs(a.w);
  for (const DensityComponent& d : nu.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&d)) {
      tv += require_converged(tv_rational(r->num, r->den, nu.peak_hints, cfg), "total_variation")
                .real();
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      tv += require_converged(
                tv_trig_rational(tr->phase, tr->omega, tr->num, tr->den, nu.peak_hints, cfg),
                "total_variation")
                .real();
    } else {
      const auto& b = std::get<BumpDensity>(d);
      auto f = [&](double t) { return cplx(std::abs(simple_rational_value(b.num, b.den, t)), 0.0); };
      tv += require_converged(integrate_adaptive(f, b.lo, b.hi, nu.peak_hints, cfg),
                              "total_variation")
                .real();
    }
  }
  return tv;
}

cplx mass(const ComplexMeasure& nu, const QuadratureConfig& cfg) {
  return integrate_kernel_rational(nu, Polynomial::constant(1.0), Polynomial::constant(1.0), cfg);
}

cplx integrate_kernel(const ComplexMeasure& nu, const std::function<cplx(double)>& f,
                      const QuadratureConfig& cfg) {
  cplx acc = 0.0;
  for (const Atom& a : nu.atoms) {
    cplx v = f(a.t);
    if (!finite(v)) fail(errc::pole, "integrand not finite at an atom location");
    acc += a.w * v;
  }
  for (const DensityComponent& d : nu.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&d)) {
      auto g = [&](double t) { return f(t) * simple_rational_value(r->num, r->den, t); };
      acc += require_converged(integrate_real_line(g, nu.peak_hints, cfg), "integrate_kernel");
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      // Generic integrand: no symbolic tail available, so push the cutoff far
      // enough out that the remaining oscillatory tail is below tolerance.
      double w = std::abs(tr->omega);
      if (w == 0.0 && tr->phase == TrigPhase::sin) continue;
      double T0 = 50.0;
      double decay = std::abs(simple_rational_value(tr->num, tr->den, T0)) * T0 * T0 +
                     std::abs(simple_rational_value(tr->num, tr->den, -T0)) * T0 * T0;
      double mf = std::max({std::abs(f(T0)), std::abs(f(-T0)), std::abs(f(0.0)), 1e-300});
      double tol = std::max(cfg.abs_tol, 1e-12);
      double T = std::clamp(std::sqrt(2.6 * decay * mf / (std::max(w, 0.05) * tol)), T0, 30000.0);
      auto g = [&](double t) {
        double osc =
            tr->phase == TrigPhase::sin ? std::sin(tr->omega * t) : std::cos(tr->omega * t);
        return f(t) * osc * simple_rational_value(tr->num, tr->den, t);
      };
      std::vector<double> hints = nu.peak_hints;
      if (w > 0.0) {
        double half = pi / w;
        long n = std::min(lround(std::ceil(T / half)), 120000L);
        T = double(n) * half;
        for (long k = -n; k <= n; ++k) hints.push_back(double(k) * half);
      }
      acc += require_converged(integrate_adaptive(g, -T, T, hints, cfg), "integrate_kernel");
    } else {
      const auto& b = std::get<BumpDensity>(d);
      auto g = [&](double t) { return f(t) * simple_rational_value(b.num, b.den, t); };
      acc += require_converged(integrate_adaptive(g, b.lo, b.hi, nu.peak_hints, cfg),
                               "integrate_kernel");
    }
  }
  return acc;
}

cplx integrate_kernel_rational(const ComplexMeasure& nu, const Polynomial& fnum,
                               const Polynomial& fden, const QuadratureConfig& cfg) {
  std::vector<double> hints = nu.peak_hints;
  if (fden.degree() >= 1)
    for (double h : near_real_peaks(fden)) hints.push_back(h);

  cplx acc = 0.0;
  for (const Atom& a : nu.atoms) {
    cplx dv = fden(a.t);
    if (std::abs(dv) < 1e-300) fail(errc::pole, "kernel has a pole at an atom location");
    acc += a.w * fnum(a.t) / dv;
  }
  for (const DensityComponent& d : nu.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&d)) {
      acc += require_converged(integrate_rational(r->num * fnum, r->den * fden, hints, cfg),
                               "integrate_kernel");
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      acc += require_converged(integrate_trig_rational(tr->phase, tr->omega, tr->num * fnum,
                                                       tr->den * fden, hints, cfg),
                               "integrate_kernel");
    } else {
      const auto& b = std::get<BumpDensity>(d);
      Polynomial n = b.num * fnum, dn = b.den * fden;
      auto g = [&](double t) { return n(t) / dn(t); };
      acc += require_converged(integrate_adaptive(g, b.lo, b.hi, hints, cfg), "integrate_kernel");
    }
  }
  return acc;
}

namespace {

DensityComponent scale_density(const DensityComponent& d, cplx s) {
  DensityComponent out = d;
  std::visit([&](auto& c) { c.num = c.num * s; }, out);
  return out;
}

}  // namespace

ComplexMeasure linear_combine(cplx alpha, const ComplexMeasure& nu1, cplx beta,
                              const ComplexMeasure& nu2) {
  std::vector<Atom> atoms;
  for (const Atom& a : nu1.atoms) atoms.push_back({a.t, alpha * a.w});
  for (const Atom& a : nu2.atoms) atoms.push_back({a.t, beta * a.w});
  std::vector<DensityComponent> dens;
  if (alpha != cplx(0.0))
    for (const DensityComponent& d : nu1.densities) dens.push_back(scale_density(d, alpha));
  if (beta != cplx(0.0))
    for (const DensityComponent& d : nu2.densities) dens.push_back(scale_density(d, beta));
  return make_measure(std::move(atoms), std::move(dens), 0);
}

ComplexMeasure conjugate_measure(const ComplexMeasure& nu) {
  std::vector<Atom> atoms;
  for (const Atom& a : nu.atoms) atoms.push_back({a.t, std::conj(a.w)});
  std::vector<DensityComponent> dens;
  for (const DensityComponent& d : nu.densities) {
    DensityComponent c = d;
    std::visit(
        [](auto& x) {
          x.num = x.num.conj();
          x.den = x.den.conj();
        },
        c);
    dens.push_back(std::move(c));
  }
  return make_measure(std::move(atoms), std::move(dens), 0);
}

std::pair<ComplexMeasure, ComplexMeasure> real_imag_parts(const ComplexMeasure& nu) {
  std::vector<Atom> re_atoms, im_atoms;
  for (const Atom& a : nu.atoms) {
    re_atoms.push_back({a.t, cplx(a.w.real(), 0.0)});
    im_atoms.push_back({a.t, cplx(a.w.imag(), 0.0)});
  }

  std::vector<DensityComponent> re_dens, im_dens;
  auto split = [&](const Polynomial& num, const Polynomial& den, auto rebuild) {
    Polynomial dreal = den * den.conj();
    Polynomial nreal = num * den.conj();
    std::vector<cplx> re_c(nreal.coeffs().size()), im_c(nreal.coeffs().size());
    for (size_t k = 0; k < nreal.coeffs().size(); ++k) {
      re_c[k] = cplx(nreal.coeffs()[k].real(), 0.0);
      im_c[k] = cplx(nreal.coeffs()[k].imag(), 0.0);
    }
    re_dens.push_back(rebuild(Polynomial(std::move(re_c)), dreal));
    im_dens.push_back(rebuild(Polynomial(std::move(im_c)), dreal));
  };

  for (const DensityComponent& d : nu.densities) {
    if (const auto* r = std::get_if<RationalDensity>(&d)) {
      split(r->num, r->den,
            [](Polynomial n, Polynomial dn) { return DensityComponent(RationalDensity{n, dn}); });
    } else if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
      split(tr->num, tr->den, [tr](Polynomial n, Polynomial dn) {
        return DensityComponent(TrigRationalDensity{tr->phase, tr->omega, n, dn});
      });
    } else {
      const auto& b = std::get<BumpDensity>(d);
      split(b.num, b.den, [&b](Polynomial n, Polynomial dn) {
        return DensityComponent(BumpDensity{b.lo, b.hi, n, dn});
      });
    }
  }
  return {make_measure(std::move(re_atoms), std::move(re_dens), 0),
          make_measure(std::move(im_atoms), std::move(im_dens), 0)};
}

bool is_real_measure(const ComplexMeasure& nu) {
  auto real_poly = [](const Polynomial& p) {
    double n = p.norm1();
    for (const cplx& c : p.coeffs())
      if (std::abs(c.imag()) > 1e-13 * std::max(1.0, n)) return false;
    return true;
  };
  for (const Atom& a : nu.atoms)
    if (std::abs(a.w.imag()) > 1e-13 * std::max(1.0, std::abs(a.w))) return false;
  for (const DensityComponent& d : nu.densities) {
    bool ok = std::visit([&](const auto& c) { return real_poly(c.num) && real_poly(c.den); }, d);
    if (!ok) return false;
  }
  return true;
}

}  // namespace qhkit
