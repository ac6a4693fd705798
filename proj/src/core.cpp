#include "qhkit/core.hpp"

#include <algorithm>
#include <cmath>

#include "qhkit/quadrature.hpp"

namespace qhkit {

namespace {

void require_off_axis(cplx z) {
  if (z.imag() == 0.0 || !finite(z)) fail(errc::domain, "evaluation requires Im z != 0");
}

cplx stable_tan(cplx z) {
  double x = z.real(), y = z.imag();
  if (y > 20.0) return cplx(0.0, 1.0);
  if (y < -20.0) return cplx(0.0, -1.0);
  double d = std::cos(2.0 * x) + std::cosh(2.0 * y);
  return cplx(std::sin(2.0 * x) / d, std::sinh(2.0 * y) / d);
}

cplx eval_builtin(const std::string& name, cplx z) {
  bool up = z.imag() > 0.0;
  if (name == "lin-split") return up ? z : -z;
  if (name == "recip-split") return up ? -1.0 / z : 1.0 / z;
  if (name == "gauss") return std::exp(-z * z);
  if (name == "sqrt-up") return up ? std::sqrt(z) : cplx(0.0);
  if (name == "exp-sym") return up ? std::exp(cplx(0.0, 1.0) * z) : std::exp(cplx(0.0, -1.0) * z);
  if (name == "tan-mi") return stable_tan(z) - cplx(0.0, 1.0);
  if (name == "recip-sq") return 1.0 / (z * z);
  if (name == "const-i-sym") return up ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  fail(errc::domain, "unknown builtin name: " + name);
}

bool nonnegative_on_real_line(const Polynomial& p) {
  if (p.is_zero()) return true;
  if (p.degree() == 0) return p.coeff(0).real() >= -1e-12 * p.norm1();
  if (p.degree() % 2 != 0) return false;
  if (p.leading().real() <= 0.0) return false;
  for (const RootCluster& r : roots(p)) {
    bool real_root = std::abs(r.value.imag()) <= 1e-7 * (1.0 + std::abs(r.value));
    if (real_root && r.multiplicity % 2 != 0) return false;
  }
  return true;
}

bool density_nonnegative(const DensityComponent& d) {
  auto grid_check = [](auto value, double lo, double hi) {
    for (int k = 0; k <= 10000; ++k) {
      double t = lo + (hi - lo) * double(k) / 10000.0;
      cplx v = value(t);
      double s = 1.0 + std::abs(v);
      if (std::abs(v.imag()) > 1e-10 * s || v.real() < -1e-10 * s) return false;
    }
    return true;
  };
  if (const auto* r = std::get_if<RationalDensity>(&d)) {
    Polynomial n = r->num * r->den.conj();
    double scale = std::max(n.norm1(), 1e-300);
    for (const cplx& c : n.coeffs())
      if (std::abs(c.imag()) > 1e-12 * scale) return false;
    std::vector<cplx> re_c;
    for (const cplx& c : n.coeffs()) re_c.push_back(cplx(c.real(), 0.0));
    return nonnegative_on_real_line(Polynomial(std::move(re_c)));
  }
  if (const auto* tr = std::get_if<TrigRationalDensity>(&d)) {
    double w = std::max(std::abs(tr->omega), 1e-3);
    double span = std::max(100.0, 40.0 * pi / w);
    return grid_check(
        [&](double t) {
          double osc =
              tr->phase == TrigPhase::sin ? std::sin(tr->omega * t) : std::cos(tr->omega * t);
          return osc * tr->num(t) / tr->den(t);
        },
        -span, span);
  }
  const auto& b = std::get<BumpDensity>(d);
  return grid_check([&](double t) { return b.num(t) / b.den(t); }, b.lo, b.hi);
}

}  // namespace

cplx kernel_Ktilde(cplx z, double t) {
  require_off_axis(z);
  return (1.0 + t * z) / (t - z);
}

cplx kernel_K(cplx z, double t) {
  require_off_axis(z);
  return 1.0 / (t - z) - t / (1.0 + t * t);
}

double poisson_P(cplx z, double t) {
  require_off_axis(z);
  return z.imag() / std::norm(t - z);
}

double poisson_Q(cplx z, double t) {
  require_off_axis(z);
  return (t - z.real()) / std::norm(t - z);
}

cplx eval(const DataTriple& d, cplx z, const QuadratureConfig& cfg) {
  require_off_axis(z);
  cplx v = d.a + d.b * z;
  if (!d.nu.atoms.empty() || !d.nu.densities.empty()) {
    Polynomial knum({cplx(1.0), z});
    Polynomial kden({-z, cplx(1.0)});
    v += integrate_kernel_rational(d.nu, knum, kden, cfg) / pi;
  }
  if (!finite(v)) fail(errc::quadrature, "evaluation produced a non-finite value");
  return v;
}

cplx eval_boundary_fn(const BoundaryFn& f, cplx z, const QuadratureConfig& cfg) {
  require_off_axis(z);
  if (const auto* fd = std::get_if<FromData>(&f)) return eval(fd->data, z, cfg);
  if (const auto* b = std::get_if<BuiltinFn>(&f)) return eval_builtin(b->name, z);
  const auto& pw = std::get<PiecewiseRational>(f);
  return z.imag() > 0.0 ? pw.upper(z) : pw.lower(z);
}

DataTriple conjugate_fn(const DataTriple& d) {
  return {std::conj(d.a), std::conj(d.b), conjugate_measure(d.nu)};
}

std::pair<DataTriple, DataTriple> quasi_parts(const DataTriple& d) {
  auto [re_nu, im_nu] = real_imag_parts(d.nu);
  DataTriple re{cplx(d.a.real(), 0.0), cplx(d.b.real(), 0.0), std::move(re_nu)};
  DataTriple im{cplx(d.a.imag(), 0.0), cplx(d.b.imag(), 0.0), std::move(im_nu)};
  return {std::move(re), std::move(im)};
}

bool is_ordinary_herglotz(const DataTriple& d) {
  double scale = 1.0 + std::abs(d.a) + std::abs(d.b);
  if (std::abs(d.a.imag()) > 1e-12 * scale) return false;
  if (std::abs(d.b.imag()) > 1e-12 * scale) return false;
  if (d.b.real() < -1e-12 * scale) return false;
  for (const Atom& a : d.nu.atoms) {
    double s = 1.0 + std::abs(a.w);
    if (std::abs(a.w.imag()) > 1e-12 * s || a.w.real() < -1e-12 * s) return false;
  }
  return std::all_of(d.nu.densities.begin(), d.nu.densities.end(), density_nonnegative);
}

DataTriple linear_combine(cplx alpha, const DataTriple& d1, cplx beta, const DataTriple& d2) {
  return {alpha * d1.a + beta * d2.a, alpha * d1.b + beta * d2.b,
          linear_combine(alpha, d1.nu, beta, d2.nu)};
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"lin-split", "recip-split", "gauss",    "sqrt-up",
                                                 "exp-sym",   "tan-mi",      "recip-sq", "const-i-sym"};
  return names;
}

BoundaryFn make_builtin(const std::string& name) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(errc::domain, "unknown builtin name: " + name);
  return BuiltinFn{name};
}

std::optional<DataTriple> builtin_data(const std::string& name) {
  if (name == "const-i-sym") return DataTriple{cplx(0.0), cplx(0.0), lambda_tilde()};
  if (name == "exp-sym") {
    TrigRationalDensity d{TrigPhase::sin, 1.0, Polynomial::constant(1.0),
                          Polynomial({cplx(1.0), cplx(0.0), cplx(1.0)})};
    return DataTriple{cplx(std::exp(-1.0)), cplx(0.0), make_measure({}, {d})};
  }
  return std::nullopt;
}

BoundaryFn from_data(DataTriple d) { return FromData{std::move(d)}; }

}  // namespace qhkit
