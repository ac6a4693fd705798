#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qhkit/core.hpp"
#include "qhkit/recover.hpp"

namespace qhkit {

// Truncated expansion of a boundary function, either
//   b1 z + b0 + b_{-1}/z + ... + b_{-K}/z^K          (anchor at infinity)
// or
//   a_{-1}/(z - t0) + a_0 + a_1 (z - t0) + ... + a_M (z - t0)^M   (anchor t0).
// coefficients[0] holds the power first_power() term; each later entry steps
// the power down by one at infinity and up by one at a point, matching the
// order the stages are computed in.
struct Expansion {
  bool at_infinity = true;
  double t0 = 0.0;
  int order = -1;     // K or M actually achieved (>= -1)
  bool truncated = false;  // a later stage diverged, cutting the requested order
  std::vector<cplx> coefficients;
  std::vector<double> errors;

  int first_power() const { return at_infinity ? 1 : -1; }
};

// Coefficient of z^power (infinity anchor) or (z - t0)^power (point anchor);
// zero outside the stored range.
cplx coefficient(const Expansion& e, int power);

Expansion expand_at_infinity(const BoundaryFn& f, int max_order, const LimitSchedule& sched = {},
                             const QuadratureConfig& cfg = {});
Expansion expand_at_point(const BoundaryFn& f, double t0, int max_order,
                          const LimitSchedule& sched = {}, const QuadratureConfig& cfg = {});

// integral of x^k Im f(x + iy) over eps < |x| < 1/eps. Requires 0 < eps < 1
// and y >= 1e-4 (below that the integrand spikes are too narrow to resolve).
double sum_rule_integral(const BoundaryFn& f, int k, double eps, double y,
                         const QuadratureConfig& cfg = {});

enum class SumRuleVerdict { identity_holds, diverges, inconclusive };

struct SumRuleSample {
  double eps = 0.0;
  double y = 0.0;
  double integral = 0.0;
};

struct SumRuleReport {
  SumRuleVerdict verdict = SumRuleVerdict::inconclusive;
  cplx predicted{};  // a_{-k-1} - b_{-k-1} from the supplied expansions
  std::vector<SumRuleSample> table;
  // One entry per eps: the y -> 0 extrapolation of the integral, already
  // divided by pi so it compares directly against `predicted`.
  std::vector<std::pair<double, double>> inner_limits;
  std::string detail;
};

// Evaluates the iterated limit (y -> 0 inside, eps -> 0 outside) of
// (1/pi) integral x^k Im f dx and compares it with the expansion prediction.
SumRuleReport sum_rule_check(const BoundaryFn& f, int k, const Expansion& at_anchor,
                             const Expansion& at_infinity, std::vector<double> eps_schedule = {},
                             std::vector<double> y_schedule = {},
                             const QuadratureConfig& cfg = {});

}  // namespace qhkit
