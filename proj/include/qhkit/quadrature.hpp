#pragma once

#include <functional>
#include <vector>

#include "qhkit/measure.hpp"
#include "qhkit/polynomial.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
  long evals = 0;
};

// Throws errc::quadrature (with the partial estimate in the message) unless
// the result converged.
cplx require_converged(const QuadResult& r, const char* context);

// Adaptive 15-point Gauss-Kronrod on [a, b]. hint points inside (a, b) become
// initial segment boundaries so narrow peaks sitting at them cannot be
// stepped over by the coarse rule.
QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                              const std::vector<double>& hints, const QuadratureConfig& cfg);

// Whole-line integral via t = tan(theta); t_hints are pre-split points in t.
// The integrand must decay at least like 1/t^2.
QuadResult integrate_real_line(const std::function<cplx(double)>& f,
                               const std::vector<double>& t_hints, const QuadratureConfig& cfg);

// Specialized engines for the closed-form density family. All of them accept
// degree gap >= 1 (absolute convergence needs >= 2; the oscillatory engine
// also handles the conditionally convergent gap-1 case).
QuadResult integrate_rational(const Polynomial& num, const Polynomial& den,
                              const std::vector<double>& hints, const QuadratureConfig& cfg);

// Integral of trig(omega t) * num/den over R: half-period cells on a window
// chosen from the denominator scale, plus integration-by-parts tails using
// symbolic derivatives of the rational factor.
QuadResult integrate_trig_rational(TrigPhase phase, double omega, const Polynomial& num,
                                   const Polynomial& den, const std::vector<double>& hints,
                                   const QuadratureConfig& cfg);

// Total-variation integrals (integrand |...|).
QuadResult tv_rational(const Polynomial& num, const Polynomial& den,
                       const std::vector<double>& hints, const QuadratureConfig& cfg);
QuadResult tv_trig_rational(TrigPhase phase, double omega, const Polynomial& num,
                            const Polynomial& den, const std::vector<double>& hints,
                            const QuadratureConfig& cfg);

// Real parts of den roots lying close enough to R to need pre-splitting.
std::vector<double> near_real_peaks(const Polynomial& den);

}  // namespace qhkit
