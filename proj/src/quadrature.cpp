#include "qhkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace qhkit {

namespace {

// 15-point Gauss-Kronrod pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<cplx(double)>& f, double a, double b, cplx& val, double& err,
          long& evals) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx resk = fc * kWgk[7];
  cplx resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    cplx f1 = f(c - x);
    cplx f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  val = resk * h;
  err = std::abs(resk - resg) * std::abs(h);
  evals += 15;
}

struct Segment {
  double a, b;
  cplx val;
  double err;
  int depth;
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const { return x.err < y.err; }
};

constexpr long kEvalBudget = 4'000'000;

}  // namespace

cplx require_converged(const QuadResult& r, const char* context) {
  if (!r.converged) {
    std::ostringstream os;
    os << context << ": quadrature did not converge (partial estimate " << r.value.real();
    if (r.value.imag() >= 0) os << "+";
    os << r.value.imag() << "i, error estimate " << r.error << ")";
    fail(errc::quadrature, os.str());
  }
  return r.value;
}

QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                              const std::vector<double>& hints, const QuadratureConfig& cfg) {
  QuadResult out;
  if (!(a < b)) return out;

  std::vector<double> pts{a, b};
  for (double h : hints)
    if (h > a && h < b) pts.push_back(h);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double x, double y) { return y - x < 1e-14 * (b - a); }),
            pts.end());
  if (pts.back() != b) pts.back() = b;

  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> active;
  cplx total = 0.0;
  double err_active = 0.0, err_frozen = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    Segment s{pts[k], pts[k + 1], 0.0, 0.0, 0};
    gk15(f, s.a, s.b, s.val, s.err, out.evals);
    total += s.val;
    err_active += s.err;
    active.push(s);
  }

  auto tol = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (err_active + err_frozen > tol() && !active.empty() && out.evals < kEvalBudget) {
    Segment s = active.top();
    active.pop();
    err_active -= s.err;
    if (s.depth >= cfg.max_subdivisions || s.b - s.a < 1e-15 * std::max(1.0, std::abs(s.a))) {
      err_frozen += s.err;
      continue;
    }
    double m = 0.5 * (s.a + s.b);
    Segment l{s.a, m, 0.0, 0.0, s.depth + 1};
    Segment r{m, s.b, 0.0, 0.0, s.depth + 1};
    gk15(f, l.a, l.b, l.val, l.err, out.evals);
    gk15(f, r.a, r.b, r.val, r.err, out.evals);
    total += l.val + r.val - s.val;
    err_active += l.err + r.err;
    active.push(l);
    active.push(r);
  }

  out.value = total;
  out.error = err_active + err_frozen;
  out.converged = finite(total) && out.error <= tol();
  return out;
}

QuadResult integrate_real_line(const std::function<cplx(double)>& f,
                               const std::vector<double>& t_hints, const QuadratureConfig& cfg) {
  std::vector<double> theta_hints;
  theta_hints.reserve(t_hints.size() + 1);
  theta_hints.push_back(0.0);
  for (double t : t_hints) theta_hints.push_back(std::atan(t));
  auto g = [&](double th) {
    double c = std::cos(th);
    return f(std::tan(th)) / (c * c);
  };
  return integrate_adaptive(g, -0.5 * pi, 0.5 * pi, theta_hints, cfg);
}

namespace {

// Evaluates num/den at t, switching to the reversed-coefficient form for huge
// |t| so intermediate powers cannot overflow.
cplx rational_value(const Polynomial& num, const Polynomial& den, double t) {
  if (std::abs(t) < 1e8) return num(t) / den(t);
  double u = 1.0 / t;
  cplx nv = 0.0, dv = 0.0;
  const auto& nc = num.coeffs();
  const auto& dc = den.coeffs();
  for (size_t k = 0; k < nc.size(); ++k) nv = nv * u + nc[k];
  for (size_t k = 0; k < dc.size(); ++k) dv = dv * u + dc[k];
  int shift = den.degree() - num.degree();
  cplx r = nv / dv;
  for (int k = 0; k < shift; ++k) r *= u;
  for (int k = 0; k > shift; --k) r *= t;
  return r;
}

double cauchy_root_bound(const Polynomial& p) {
  if (p.degree() < 1) return 1.0;
  double m = 0.0;
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, std::abs(p.coeff(k) / p.leading()));
  return 1.0 + m;
}

}  // namespace

std::vector<double> near_real_peaks(const Polynomial& den) {
  std::vector<double> out;
  if (den.degree() < 1) return out;
  for (const RootCluster& r : roots(den))
    if (std::abs(r.value.imag()) < 0.5) out.push_back(r.value.real());
  return out;
}

QuadResult integrate_rational(const Polynomial& num, const Polynomial& den,
                              const std::vector<double>& hints, const QuadratureConfig& cfg) {
  if (num.is_zero()) return {};
  if (den.degree() - num.degree() < 1)
    fail(errc::domain, "rational integrand does not decay at infinity");
  auto f = [&](double t) { return rational_value(num, den, t); };
  return integrate_real_line(f, hints, cfg);
}

QuadResult tv_rational(const Polynomial& num, const Polynomial& den,
                       const std::vector<double>& hints, const QuadratureConfig& cfg) {
  if (num.is_zero()) return {};
  if (den.degree() - num.degree() < 2)
    fail(errc::domain, "total-variation integrand is not absolutely integrable");
  auto f = [&](double t) { return cplx(std::abs(rational_value(num, den, t)), 0.0); };
  return integrate_real_line(f, hints, cfg);
}

namespace {

struct TrigSetup {
  double sign = 1.0;  // factor pulled out when normalizing omega > 0
  double omega = 1.0;
  bool degenerate_zero = false;      // sin with omega == 0
  bool degenerate_rational = false;  // cos with omega == 0
};

TrigSetup normalize_trig(TrigPhase phase, double omega) {
  TrigSetup s;
  if (omega == 0.0) {
    if (phase == TrigPhase::sin)
      s.degenerate_zero = true;
    else
      s.degenerate_rational = true;
    return s;
  }
  s.omega = std::abs(omega);
  if (omega < 0.0 && phase == TrigPhase::sin) s.sign = -1.0;
  return s;
}

// Derivative chain n_j with R^(j) = n_j / den^(j+1).
std::vector<Polynomial> derivative_chain(const Polynomial& num, const Polynomial& den, int J) {
  std::vector<Polynomial> nj{num};
  Polynomial dden = den.derivative();
  for (int j = 0; j + 1 < J; ++j)
    nj.push_back(nj.back().derivative() * den - nj.back() * dden * cplx(double(j + 1)));
  return nj;
}

cplx chain_value(const std::vector<Polynomial>& nj, const Polynomial& den, int j, double t) {
  cplx v = nj[size_t(j)](t);
  cplx d = den(t);
  for (int k = 0; k <= j; ++k) v /= d;
  return v;
}

// Asymptotic approximation of the upper tail integral of e^(i mu t) R(t).
cplx ibp_tail(double mu, double T, const std::vector<Polynomial>& nj, const Polynomial& den) {
  cplx iu(0.0, mu);
  cplx fac = 1.0, s = 0.0;
  for (size_t j = 0; j < nj.size(); ++j) {
    fac /= iu;
    double sgn = (j % 2 == 0) ? -1.0 : 1.0;
    s += sgn * chain_value(nj, den, int(j), T) * fac;
  }
  return s * std::exp(cplx(0.0, mu * T));
}

Polynomial reflect(const Polynomial& p) {
  std::vector<cplx> c = p.coeffs();
  for (size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  return Polynomial(std::move(c));
}

}  // namespace

QuadResult integrate_trig_rational(TrigPhase phase, double omega, const Polynomial& num,
                                   const Polynomial& den, const std::vector<double>& hints,
                                   const QuadratureConfig& cfg) {
  if (num.is_zero()) return {};
  TrigSetup setup = normalize_trig(phase, omega);
  if (setup.degenerate_zero) return {};
  if (setup.degenerate_rational) return integrate_rational(num, den, hints, cfg);
  double w = setup.omega;
  if (den.degree() - num.degree() < 1)
    fail(errc::domain, "oscillatory integrand does not decay at infinity");

  constexpr int J = 6;
  std::vector<Polynomial> chain_up = derivative_chain(num, den, J);
  Polynomial num_rf = reflect(num), den_rf = reflect(den);
  std::vector<Polynomial> chain_dn = derivative_chain(num_rf, den_rf, J);

  double T0 = std::max(12.0, 1.5 * cauchy_root_bound(den) + 8.0);
  double tol_goal = 0.25 * cfg.abs_tol;
  double T = T0, tail_scale = 0.0;
  for (int tries = 0; tries < 24; ++tries) {
    tail_scale = std::abs(chain_value(chain_up, den, J - 1, T)) +
                 std::abs(chain_value(chain_dn, den_rf, J - 1, T));
    double est = tail_scale * T / (std::pow(w, J) * double(J));
    if (est <= tol_goal || T > 2e5) break;
    T *= 1.7;
  }
  double half_period = pi / w;
  long ncells = lround(std::ceil(T / half_period));
  ncells = std::min(ncells, 100000L);
  T = double(ncells) * half_period;

  auto trig = [&](double t) { return phase == TrigPhase::sin ? std::sin(w * t) : std::cos(w * t); };
  auto f = [&](double t) { return trig(t) * rational_value(num, den, t); };
  std::vector<double> cell_hints = hints;
  for (long k = -ncells; k <= ncells; ++k) cell_hints.push_back(double(k) * half_period);
  QuadResult body = integrate_adaptive(f, -T, T, cell_hints, cfg);

  // trig = c_plus e^{i w t} + c_minus e^{-i w t}
  cplx c_plus = (phase == TrigPhase::sin) ? cplx(0.0, -0.5) : cplx(0.5, 0.0);
  cplx c_minus = (phase == TrigPhase::sin) ? cplx(0.0, 0.5) : cplx(0.5, 0.0);
  cplx upper = c_plus * ibp_tail(w, T, chain_up, den) + c_minus * ibp_tail(-w, T, chain_up, den);
  // lower tail via u = -t
  cplx lower =
      c_plus * ibp_tail(-w, T, chain_dn, den_rf) + c_minus * ibp_tail(w, T, chain_dn, den_rf);

  QuadResult out;
  out.value = setup.sign * (body.value + upper + lower);
  out.error = body.error + tail_scale * T / (std::pow(w, J) * double(J));
  out.evals = body.evals;
  out.converged = body.converged && finite(out.value);
  return out;
}

QuadResult tv_trig_rational(TrigPhase phase, double omega, const Polynomial& num,
                            const Polynomial& den, const std::vector<double>& hints,
                            const QuadratureConfig& cfg) {
  if (num.is_zero()) return {};
  TrigSetup setup = normalize_trig(phase, omega);
  if (setup.degenerate_zero) return {};
  if (setup.degenerate_rational) return tv_rational(num, den, hints, cfg);
  double w = setup.omega;
  if (den.degree() - num.degree() < 2)
    fail(errc::domain, "total-variation integrand is not absolutely integrable");

  double T0 = std::max(20.0, 1.5 * cauchy_root_bound(den) + 10.0);
  double decay_scale = std::abs(rational_value(num, den, T0)) * T0 * T0 +
                       std::abs(rational_value(num, den, -T0)) * T0 * T0;
  double tol_goal = std::max(0.25 * cfg.abs_tol, 1e-12);
  double T = std::clamp(std::sqrt(2.6 * decay_scale / (w * tol_goal)), T0, 30000.0);
  double half_period = pi / w;
  long ncells = std::min(lround(std::ceil(T / half_period)), 120000L);
  T = double(ncells) * half_period;

  auto trig = [&](double t) { return phase == TrigPhase::sin ? std::sin(w * t) : std::cos(w * t); };
  auto f = [&](double t) {
    return cplx(std::abs(trig(t) * rational_value(num, den, t)), 0.0);
  };
  std::vector<double> cell_hints = hints;
  for (long k = -ncells; k <= ncells; ++k) cell_hints.push_back(double(k) * half_period);
  QuadResult body = integrate_adaptive(f, -T, T, cell_hints, cfg);

  // |trig| averages 2/pi per half period; beyond T replace it by its mean.
  double th = std::atan(T);
  auto absr = [&](double t) { return cplx(std::abs(rational_value(num, den, t)), 0.0); };
  auto g = [&](double theta) {
    double c = std::cos(theta);
    return absr(std::tan(theta)) / (c * c);
  };
  QuadResult tail_hi = integrate_adaptive(g, th, 0.5 * pi, {}, cfg);
  QuadResult tail_lo = integrate_adaptive(g, -0.5 * pi, -th, {}, cfg);
  double tail = (2.0 / pi) * (tail_hi.value.real() + tail_lo.value.real());

  QuadResult out;
  out.value = body.value + tail;
  out.error = body.error + tail_hi.error + tail_lo.error + decay_scale / (w * T * T);
  out.evals = body.evals + tail_hi.evals + tail_lo.evals;
  out.converged = body.converged && tail_hi.converged && tail_lo.converged;
  return out;
}

}  // namespace qhkit
