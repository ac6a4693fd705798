#include "qhkit/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhkit/quadrature.hpp"

namespace qhkit {

namespace {

cplx ipow(cplx z, int p) {
  if (p == 0) return cplx(1.0);
  bool neg = p < 0;
  unsigned e = neg ? static_cast<unsigned>(-(long)p) : static_cast<unsigned>(p);
  cplx base = z, acc(1.0);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return neg ? cplx(1.0) / acc : acc;
}

struct Term {
  int power;
  cplx coeff;
};

cplx residual_value(const BoundaryFn& f, cplx z, const std::vector<Term>& known,
                    cplx center, const QuadratureConfig& cfg) {
  cplx v = eval_boundary_fn(f, z, cfg);
  for (const Term& t : known) v -= t.coeff * ipow(z - center, t.power);
  return v;
}

std::string power_label(bool at_infinity, int power) {
  std::ostringstream s;
  s << (at_infinity ? "b(" : "a(") << power << ")";
  return s.str();
}

Expansion expand(const BoundaryFn& f, bool at_infinity, double t0, int max_order,
                 const LimitSchedule& sched, const QuadratureConfig& cfg) {
  if (max_order < -1) {
    fail(errc::domain, "expansion order must be at least -1");
  }
  Expansion e;
  e.at_infinity = at_infinity;
  e.t0 = at_infinity ? 0.0 : t0;
  const int stages = max_order + 2;  // powers top, top-1, ..., -max_order or ..., max_order
  std::vector<Term> known;
  for (int j = 0; j < stages; ++j) {
    int power = at_infinity ? 1 - j : j - 1;
    LimitResult lr;
    if (at_infinity) {
      // z = i/y: residual(z) z^{-power} with center 0.
      auto g = [&](double y) {
        cplx z = cplx(0.0, 1.0) / cplx(y);
        return residual_value(f, z, known, cplx(0.0), cfg) * ipow(z, -power);
      };
      lr = extrapolate_limit(g, sched);
    } else {
      auto g = [&](double y) {
        cplx z = cplx(t0, y);
        return residual_value(f, z, known, cplx(t0), cfg) * ipow(z - cplx(t0), -power);
      };
      lr = extrapolate_limit(g, sched);
    }
    if (lr.diverged) {
      if (j == 0) {
        std::ostringstream msg;
        msg << "leading coefficient " << power_label(at_infinity, power)
            << " does not converge along the vertical ray; no expansion exists";
        fail(errc::convergence, msg.str());
      }
      e.truncated = true;
      e.order = j - 2;
      return e;
    }
    known.push_back({power, lr.value});
    e.coefficients.push_back(lr.value);
    e.errors.push_back(lr.error);
  }
  e.order = max_order;
  return e;
}

std::vector<double> interval_hints(const BoundaryFn& f, double lo, double hi) {
  std::vector<double> hints;
  auto add = [&](double x) {
    if (x > lo && x < hi) hints.push_back(x);
  };
  if (const auto* fd = std::get_if<FromData>(&f)) {
    for (double h : fd->data.nu.peak_hints) add(h);
    for (const auto& atom : fd->data.nu.atoms) add(atom.t);
  } else if (const auto* pr = std::get_if<PiecewiseRational>(&f)) {
    for (double h : near_real_peaks(pr->upper.den())) add(h);
    for (double h : near_real_peaks(pr->lower.den())) add(h);
  } else if (std::get<BuiltinFn>(f).name == "tan-mi") {
    double half_pi = pi / 2.0;
    long m0 = std::lround(std::floor((lo - half_pi) / pi));
    for (long m = m0; ; ++m) {
      double x = half_pi + pi * static_cast<double>(m);
      if (x >= hi) break;
      add(x);
    }
  }
  std::sort(hints.begin(), hints.end());
  return hints;
}

struct NevilleResult {
  double value = 0.0;
  double error = 0.0;
};

// Polynomial extrapolation to 0 through (xs[j], vs[j]); xs need not be
// geometric. Stops at the noise floor when corrections start growing again.
NevilleResult neville_at_zero(const std::vector<double>& xs, const std::vector<double>& vs) {
  size_t n = xs.size();
  std::vector<double> tab = vs;
  NevilleResult best{tab[n - 1], std::abs(n > 1 ? tab[n - 1] - tab[n - 2] : tab[n - 1])};
  double prev = tab[0];
  for (size_t k = 1; k < n; ++k) {
    for (size_t j = 0; j + k < n; ++j) {
      tab[j] = (xs[j] * tab[j + 1] - xs[j + k] * tab[j]) / (xs[j] - xs[j + k]);
    }
    double corr = std::abs(tab[0] - prev);
    if (k == 1 || corr <= best.error) {
      best.value = tab[0];
      best.error = corr;
    } else if (corr > 50.0 * best.error + 1e-13 * (1.0 + std::abs(best.value))) {
      break;
    }
    prev = tab[0];
  }
  best.error += 1e-12 * (1.0 + std::abs(best.value));
  return best;
}

}  // namespace

cplx coefficient(const Expansion& e, int power) {
  long idx = e.at_infinity ? static_cast<long>(e.first_power()) - power
                           : static_cast<long>(power) - e.first_power();
  if (idx < 0 || idx >= static_cast<long>(e.coefficients.size())) return cplx(0.0);
  return e.coefficients[static_cast<size_t>(idx)];
}

Expansion expand_at_infinity(const BoundaryFn& f, int max_order, const LimitSchedule& sched,
                             const QuadratureConfig& cfg) {
  return expand(f, true, 0.0, max_order, sched, cfg);
}

Expansion expand_at_point(const BoundaryFn& f, double t0, int max_order,
                          const LimitSchedule& sched, const QuadratureConfig& cfg) {
  if (!std::isfinite(t0)) fail(errc::domain, "expansion anchor must be a finite real point");
  return expand(f, false, t0, max_order, sched, cfg);
}

double sum_rule_integral(const BoundaryFn& f, int k, double eps, double y,
                         const QuadratureConfig& cfg) {
  if (k < 0) fail(errc::domain, "sum rule moment index must be nonnegative");
  if (!(eps > 0.0 && eps < 1.0)) fail(errc::domain, "sum rule cutoff eps must lie in (0, 1)");
  if (!(y >= 1e-4) || !std::isfinite(y)) {
    fail(errc::domain, "sum rule height y must be at least 1e-4");
  }
  auto integrand = [&](double x) {
    cplx v = eval_boundary_fn(f, cplx(x, y), cfg);
    return cplx(std::pow(x, k) * v.imag());
  };
  double lo = eps, hi = 1.0 / eps;
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    double a = side == 0 ? lo : -hi;
    double b = side == 0 ? hi : -lo;
    auto hints = interval_hints(f, a, b);
    auto q = integrate_adaptive(integrand, a, b, hints, cfg);
    total += require_converged(q, "sum rule integral").real();
  }
  return total;
}

SumRuleReport sum_rule_check(const BoundaryFn& f, int k, const Expansion& at_anchor,
                             const Expansion& at_infinity, std::vector<double> eps_schedule,
                             std::vector<double> y_schedule, const QuadratureConfig& cfg) {
  if (at_anchor.at_infinity || !at_infinity.at_infinity) {
    fail(errc::domain, "sum_rule_check needs a point expansion and an infinity expansion");
  }
  if (std::abs(at_anchor.t0) > 1e-12) {
    fail(errc::domain, "the sum rule point expansion must be anchored at 0");
  }
  if (eps_schedule.empty()) eps_schedule = {0.2, 0.1, 0.05, 0.02};
  if (y_schedule.empty()) {
    double y = 0.05;
    for (int j = 0; j < 8; ++j, y *= 0.5) y_schedule.push_back(y);
  }
  std::sort(eps_schedule.begin(), eps_schedule.end(), std::greater<double>());
  std::sort(y_schedule.begin(), y_schedule.end(), std::greater<double>());
  for (double e : eps_schedule) {
    if (!(e > 0.0 && e < 1.0)) fail(errc::domain, "sum rule cutoff eps must lie in (0, 1)");
  }

  SumRuleReport report;
  report.predicted = coefficient(at_anchor, -k - 1) - coefficient(at_infinity, -k - 1);

  std::vector<double> scaled_limits;
  std::vector<double> limit_errors;
  for (double eps : eps_schedule) {
    std::vector<double> vals;
    for (double y : y_schedule) {
      double v = sum_rule_integral(f, k, eps, y, cfg);
      report.table.push_back({eps, y, v});
      vals.push_back(v);
    }
    NevilleResult inner =
        vals.size() >= 3 ? neville_at_zero(y_schedule, vals)
                         : NevilleResult{vals.back(), std::abs(vals.back() - vals.front())};
    double scaled = inner.value / pi;
    report.inner_limits.emplace_back(eps, scaled);
    scaled_limits.push_back(scaled);
    limit_errors.push_back(inner.error / pi);
  }

  size_t n = scaled_limits.size();
  double last = scaled_limits[n - 1];
  double inner_tol = 3.0 * limit_errors[n - 1];
  double match_tol = std::max({1e-6, 1e-6 * std::abs(report.predicted), inner_tol});
  bool monotone_growth = n >= 3;
  for (size_t j = 0; j + 1 < n && monotone_growth; ++j) {
    monotone_growth = std::abs(scaled_limits[j + 1]) > std::abs(scaled_limits[j]);
  }
  bool settled = n < 2 || std::abs(last - scaled_limits[n - 2]) <=
                              std::max(match_tol, 1e-4 * (1.0 + std::abs(last)));

  std::ostringstream msg;
  msg << "(1/pi) * inner limits over eps:";
  for (size_t j = 0; j < n; ++j) {
    msg << " (" << format_double(eps_schedule[j]) << ", " << format_double(scaled_limits[j])
        << ")";
  }
  msg << "; predicted " << format_double(report.predicted.real());
  if (report.predicted.imag() != 0.0) {
    msg << " + " << format_double(report.predicted.imag()) << "i";
  }

  if (monotone_growth &&
      std::abs(scaled_limits[n - 1]) > std::max(10.0, 3.0 * std::abs(scaled_limits[0]) + 1.0)) {
    report.verdict = SumRuleVerdict::diverges;
    msg << "; the truncated integrals grow without settling";
  } else if (settled && std::abs(last - report.predicted.real()) <= match_tol &&
             std::abs(report.predicted.imag()) <= match_tol) {
    report.verdict = SumRuleVerdict::identity_holds;
    msg << "; the iterated limit matches the expansion prediction";
  } else {
    report.verdict = SumRuleVerdict::inconclusive;
    msg << "; the eps trend neither settles at the prediction nor grows monotonically";
  }
  report.detail = msg.str();
  return report;
}

}  // namespace qhkit
