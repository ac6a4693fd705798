#include "qhkit/recover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qhkit {

LimitResult extrapolate_limit(const std::function<cplx(double)>& g, const LimitSchedule& sched) {
  if (sched.n < 3 || sched.y0 <= 0.0 || sched.y0 > 1.0 || sched.r <= 0.0 || sched.r >= 1.0)
    fail(errc::domain, "limit schedule requires y0 in (0,1], r in (0,1), n >= 3");

  int jmax = std::max(0, sched.extrapolation_order);
  std::vector<cplx> prev_row, row;
  std::vector<cplx> raw;
  std::vector<cplx> estimates;

  LimitResult res;
  double best_delta = std::numeric_limits<double>::infinity();
  int worse_streak = 0;
  double y = sched.y0;
  for (int k = 0; k < sched.n; ++k, y *= sched.r) {
    cplx v = g(y);
    if (!finite(v)) {
      res.diverged = true;
      break;
    }
    raw.push_back(v);
    row.assign(1, v);
    int cols = std::min(k, jmax);
    double rpow = 1.0;
    for (int j = 1; j <= cols; ++j) {
      rpow *= sched.r;
      // Eliminates the y^j error term between two schedule neighbours.
      cplx t = row[size_t(j - 1)] +
               (row[size_t(j - 1)] - prev_row[size_t(j - 1)]) / (1.0 / rpow - 1.0);
      row.push_back(t);
    }
    prev_row = row;
    estimates.push_back(row.back());
    if (estimates.size() >= 2) {
      double d = std::abs(estimates[estimates.size() - 1] - estimates[estimates.size() - 2]);
      if (d < best_delta) {
        best_delta = d;
        res.value = estimates.back();
        worse_streak = 0;
      } else {
        // Once rounding noise dominates, further refinement only deteriorates.
        if (++worse_streak >= 4 && d > 100.0 * best_delta) break;
      }
    }
  }

  if (raw.empty()) {
    res.diverged = true;
    res.error = std::numeric_limits<double>::infinity();
    return res;
  }
  if (estimates.empty()) res.value = raw.front();
  res.error = std::max(best_delta, 1e-14 * (1.0 + std::abs(res.value)));

  // Raw-sequence growth: the limit does not exist along the schedule.
  size_t m = raw.size();
  if (m >= 6) {
    bool growing = true;
    for (size_t k = m - 5; k < m; ++k)
      if (std::abs(raw[k]) < 1.3 * std::abs(raw[k - 1])) growing = false;
    if (growing && std::abs(raw.back()) > 10.0 * std::abs(raw.front()) + 1.0) res.diverged = true;
  }
  if (best_delta > 0.05 * (1.0 + std::abs(res.value))) res.diverged = true;
  return res;
}

cplx extract_a(const BoundaryFn& f, const QuadratureConfig& cfg) {
  return 0.5 * (eval_boundary_fn(f, cplx(0.0, 1.0), cfg) +
                eval_boundary_fn(f, cplx(0.0, -1.0), cfg));
}

LimitResult extract_b_detail(const BoundaryFn& f, const LimitSchedule& sched,
                             const QuadratureConfig& cfg) {
  auto g = [&](double y) {
    cplx z(0.0, 1.0 / y);
    return eval_boundary_fn(f, z, cfg) / z;
  };
  return extrapolate_limit(g, sched);
}

cplx extract_b(const BoundaryFn& f, const LimitSchedule& sched, const QuadratureConfig& cfg) {
  LimitResult r = extract_b_detail(f, sched, cfg);
  if (r.diverged)
    fail(errc::convergence, "the non-tangential limit of q(z)/z does not converge");
  return r.value;
}

cplx extract_b_via_mass(const BoundaryFn& f, const ComplexMeasure& nu,
                        const QuadratureConfig& cfg) {
  cplx qi = eval_boundary_fn(f, cplx(0.0, 1.0), cfg);
  cplx qmi = eval_boundary_fn(f, cplx(0.0, -1.0), cfg);
  return (qi - qmi) / cplx(0.0, 2.0) - mass(nu, cfg) / pi;
}

LimitResult recover_density_detail(const BoundaryFn& f, double x, const LimitSchedule& sched,
                                   const QuadratureConfig& cfg) {
  auto g = [&](double y) {
    cplx up = eval_boundary_fn(f, cplx(x, y), cfg);
    cplx lo = eval_boundary_fn(f, cplx(x, -y), cfg);
    return (up - lo) / (cplx(0.0, 2.0) * (1.0 + x * x));
  };
  return extrapolate_limit(g, sched);
}

cplx recover_density(const BoundaryFn& f, double x, const LimitSchedule& sched,
                     const QuadratureConfig& cfg) {
  return recover_density_detail(f, x, sched, cfg).value;
}

namespace {

LimitResult atom_limit(const BoundaryFn& f, double t0, int side, const LimitSchedule& sched,
                       const QuadratureConfig& cfg) {
  auto g = [&](double y) {
    cplx z(t0, side * y);
    return (cplx(t0, 0.0) - z) * eval_boundary_fn(f, z, cfg) * (pi / (1.0 + t0 * t0));
  };
  return extrapolate_limit(g, sched);
}

}  // namespace

cplx recover_atom(const BoundaryFn& f, double t0, const LimitSchedule& sched,
                  const QuadratureConfig& cfg) {
  LimitResult up = atom_limit(f, t0, +1, sched, cfg);
  LimitResult lo = atom_limit(f, t0, -1, sched, cfg);
  if (up.diverged || lo.diverged)
    fail(errc::convergence, "point-mass limit does not converge at the requested location");
  double tol = std::max(1e-6 * (1.0 + std::abs(up.value)), 10.0 * (up.error + lo.error));
  if (std::abs(up.value - lo.value) > tol)
    fail(errc::recovery,
         "upper and lower approach limits disagree; not a quasi-Herglotz boundary point");
  return 0.5 * (up.value + lo.value);
}

cplx higher_order_vanishing(const BoundaryFn& f, double t0, int m, const LimitSchedule& sched,
                            const QuadratureConfig& cfg) {
  if (m < 2) fail(errc::domain, "higher_order_vanishing requires order m >= 2");
  auto g = [&](double y) {
    cplx z(t0, y);
    cplx factor = std::pow(cplx(t0, 0.0) - z, double(m));
    return factor * eval_boundary_fn(f, z, cfg);
  };
  LimitResult r = extrapolate_limit(g, sched);
  if (r.diverged)
    fail(errc::convergence, "higher-order limit does not converge at the requested location");
  return r.value;
}

namespace {

// Newton divided-difference interpolation through up to four nodes, expanded
// to monomial coefficients in t.
Polynomial interpolating_poly(const std::vector<double>& xs, const std::vector<cplx>& ys) {
  size_t n = xs.size();
  std::vector<cplx> dd = ys;
  std::vector<cplx> newton(n);
  newton[0] = dd[0];
  for (size_t level = 1; level < n; ++level) {
    for (size_t k = 0; k + level < n; ++k)
      dd[k] = (dd[k + 1] - dd[k]) / (xs[k + level] - xs[k]);
    newton[level] = dd[0];
  }
  Polynomial p = Polynomial::constant(newton[n - 1]);
  for (size_t k = n - 1; k-- > 0;) {
    p = p * Polynomial({cplx(-xs[k], 0.0), cplx(1.0)}) + Polynomial::constant(newton[k]);
  }
  return p;
}

// Decaying rational basis for the density outside the sampling window:
//   1/(1+t^2), t/(1+t^2)^2, t^2/(1+t^2)^3, t^3/(1+t^2)^4
// with leading behaviours t^-2 through t^-5. Each shape function stays
// below 1 inside the window, so large tail coefficients do not dominate
// the in-window remainder handed to the bump fit.
constexpr int kTailTerms = 4;

double tail_basis(int i, double t) {
  double u = 1.0 / (1.0 + t * t);
  double p = u;
  for (int k = 0; k < i; ++k) p *= t * u;
  return p;
}

// Least-squares fit of rho(t) * t^2 against powers of w = s/t on nodes
// beyond the sampling window. The resulting series
//   rho(t) ~ q0/t^2 + q1 s/t^3 + q2 s^2/t^4 + q3 s^3/t^5
// converts to tail_basis coefficients by matching inverse powers of t:
//   basis0 = t^-2 - t^-4 + ...   basis1 = t^-3 - 2 t^-5 + ...
//   basis2 = t^-4 - ...          basis3 = t^-5 - ...
std::array<cplx, kTailTerms> fit_tail(const std::vector<double>& xs,
                                      const std::vector<cplx>& rho, double s) {
  if (xs.size() < 2 * kTailTerms) return {};
  std::array<std::array<double, kTailTerms>, kTailTerms> m{};
  std::array<cplx, kTailTerms> rhs{};
  for (size_t j = 0; j < xs.size(); ++j) {
    std::array<double, kTailTerms> row;
    double w = s / xs[j];
    double p = 1.0;
    for (int i = 0; i < kTailTerms; ++i, p *= w) row[size_t(i)] = p;
    cplx target = rho[j] * (xs[j] * xs[j]);
    for (int i = 0; i < kTailTerms; ++i) {
      for (int k = 0; k < kTailTerms; ++k) m[size_t(i)][size_t(k)] += row[size_t(i)] * row[size_t(k)];
      rhs[size_t(i)] += row[size_t(i)] * target;
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  std::array<cplx, kTailTerms> q = rhs;
  for (int col = 0; col < kTailTerms; ++col) {
    int piv = col;
    for (int r = col + 1; r < kTailTerms; ++r)
      if (std::abs(m[size_t(r)][size_t(col)]) > std::abs(m[size_t(piv)][size_t(col)])) piv = r;
    std::swap(m[size_t(col)], m[size_t(piv)]);
    std::swap(q[size_t(col)], q[size_t(piv)]);
    if (std::abs(m[size_t(col)][size_t(col)]) < 1e-300) return {};
    for (int r = col + 1; r < kTailTerms; ++r) {
      double factor = m[size_t(r)][size_t(col)] / m[size_t(col)][size_t(col)];
      for (int k = col; k < kTailTerms; ++k) m[size_t(r)][size_t(k)] -= factor * m[size_t(col)][size_t(k)];
      q[size_t(r)] -= factor * q[size_t(col)];
    }
  }
  for (int r = kTailTerms - 1; r >= 0; --r) {
    for (int k = r + 1; k < kTailTerms; ++k) q[size_t(r)] -= m[size_t(r)][size_t(k)] * q[size_t(k)];
    q[size_t(r)] /= m[size_t(r)][size_t(r)];
  }
  cplx p0 = q[0], p1 = q[1] * s, p2 = q[2] * s * s, p3 = q[3] * s * s * s;
  return {p0, p1, p0 + p2, 2.0 * p1 + p3};
}

}  // namespace

RecoveryReport recover_data_detail(const BoundaryFn& f, const RecoverySpec& spec,
                                   const LimitSchedule& b_sched, const QuadratureConfig& cfg) {
  if (!(spec.window_lo < spec.window_hi) || spec.step <= 0.0)
    fail(errc::domain, "recovery window must satisfy lo < hi with a positive step");

  cplx a = extract_a(f, cfg);
  cplx b = extract_b(f, b_sched, cfg);

  std::vector<Atom> atoms;
  for (double t0 : spec.candidate_atoms) {
    cplx w = recover_atom(f, t0, spec.atom_schedule, cfg);
    if (std::abs(w) > 1e-8) atoms.push_back({t0, w});
  }

  // Sample the boundary density of f minus its recovered point masses; the
  // subtraction keeps the jump limit smooth near the atom locations. Nodes
  // are still nudged off declared locations to stay clear of residual poles
  // from imperfect atom weights.
  auto atom_free = [&](cplx z) {
    cplx v = eval_boundary_fn(f, z, cfg);
    for (const Atom& at : atoms) v -= at.w * kernel_Ktilde(z, at.t) / pi;
    return v;
  };
  auto sample_density = [&](double x, const LimitSchedule& sched) {
    auto g = [&](double y) {
      return (atom_free(cplx(x, y)) - atom_free(cplx(x, -y))) /
             (cplx(0.0, 2.0) * (1.0 + x * x));
    };
    return extrapolate_limit(g, sched).value;
  };
  size_t n_pts = size_t(std::floor((spec.window_hi - spec.window_lo) / spec.step + 0.5)) + 1;
  std::vector<double> xs(n_pts);
  std::vector<cplx> rho(n_pts);
  for (size_t j = 0; j < n_pts; ++j) {
    double x = spec.window_lo + double(j) * spec.step;
    for (double t0 : spec.candidate_atoms)
      if (std::abs(x - t0) < 0.5 * spec.step)
        x = t0 + (x >= t0 ? 0.6 : -0.6) * spec.step;
    xs[j] = x;
    rho[j] = sample_density(x, spec.density_schedule);
  }

  std::array<cplx, kTailTerms> tail{};
  if (spec.tail == RecoverySpec::Tail::inverse_quadratic) {
    // The fit region starts past the window, where the density has no poles
    // left, so a short limit schedule already resolves the boundary values.
    LimitSchedule far_sched = spec.density_schedule;
    far_sched.n = std::min(far_sched.n, 6);
    std::vector<double> far_xs;
    std::vector<cplx> far_rho;
    double reach = std::max({std::abs(spec.window_lo), std::abs(spec.window_hi), 1.0});
    for (int side = 0; side < 2; ++side) {
      double t = reach * 1.05;
      for (int k = 0; k < 12; ++k, t *= 1.13) {
        double x = side ? -t : t;
        far_xs.push_back(x);
        far_rho.push_back(sample_density(x, far_sched));
      }
    }
    tail = fit_tail(far_xs, far_rho, reach);
  }
  auto tail_at = [&](double t) {
    cplx v = 0.0;
    for (int i = 0; i < kTailTerms; ++i) v += tail[size_t(i)] * tail_basis(i, t);
    return v;
  };

  std::vector<DensityComponent> dens;
  double tail_mag = 0.0;
  for (const cplx& c : tail) tail_mag = std::max(tail_mag, std::abs(c));
  if (tail_mag > 1e-10) {
    Polynomial one_t2({cplx(1.0), cplx(0.0), cplx(1.0)});
    Polynomial tpoly({cplx(0.0), cplx(1.0)});
    Polynomial t2 = tpoly * tpoly;
    Polynomial num = one_t2 * one_t2 * one_t2 * tail[0] + one_t2 * one_t2 * tpoly * tail[1] +
                     one_t2 * t2 * tail[2] + t2 * tpoly * tail[3];
    dens.push_back(RationalDensity{num, one_t2 * one_t2 * one_t2 * one_t2});
  }

  // Piecewise cubic fit of the remainder, one bump per three grid steps.
  std::vector<cplx> rem(n_pts);
  double rem_peak = 0.0;
  for (size_t j = 0; j < n_pts; ++j) {
    rem[j] = rho[j] - tail_at(xs[j]);
    rem_peak = std::max(rem_peak, std::abs(rem[j]));
  }
  for (size_t j = 0; j + 1 < n_pts; j += 3) {
    size_t hi = std::min(j + 3, n_pts - 1);
    std::vector<double> bx(xs.begin() + long(j), xs.begin() + long(hi) + 1);
    std::vector<cplx> by(rem.begin() + long(j), rem.begin() + long(hi) + 1);
    double block_peak = 0.0;
    for (const cplx& v : by) block_peak = std::max(block_peak, std::abs(v));
    if (block_peak <= std::max(1e-12, 1e-9 * rem_peak)) continue;
    dens.push_back(BumpDensity{bx.front(), bx.back(), interpolating_poly(bx, by)});
  }

  RecoveryReport rep;
  rep.data = DataTriple{a, b, make_measure(std::move(atoms), std::move(dens))};

  for (double im : {0.4, 1.3}) {
    for (double re : {-4.5, -2.1, 0.3, 1.9, 3.8}) {
      for (int sgn : {1, -1}) {
        cplx z(re, sgn * im);
        cplx want = eval_boundary_fn(f, z, cfg);
        cplx got = eval(rep.data, z, cfg);
        rep.max_residual =
            std::max(rep.max_residual, std::abs(got - want) / (1.0 + std::abs(want)));
      }
    }
  }
  if (rep.max_residual > 5e-3)
    fail(errc::recovery, "recovered data fails to reproduce the function on the validation "
                         "grid; max relative residual " +
                             format_double(rep.max_residual));
  return rep;
}

DataTriple recover_data(const BoundaryFn& f, const RecoverySpec& spec,
                        const LimitSchedule& b_sched, const QuadratureConfig& cfg) {
  return recover_data_detail(f, spec, b_sched, cfg).data;
}

}  // namespace qhkit
