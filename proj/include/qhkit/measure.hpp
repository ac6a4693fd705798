#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "qhkit/polynomial.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

struct Atom {
  double t = 0.0;
  cplx w{0.0, 0.0};
};

enum class TrigPhase { sin, cos };

// num/den over all of R; den has no real zeros and deg num <= deg den - 2.
struct RationalDensity {
  Polynomial num, den;
};

// trig(omega * t) * num/den, same constraints on the rational factor.
struct TrigRationalDensity {
  TrigPhase phase = TrigPhase::sin;
  double omega = 1.0;
  Polynomial num, den;
};

// (num/den) restricted to [lo, hi]; den defaults to 1 and must not vanish on
// the window. The denominator slot keeps the family closed under the
// (t+i)^2 multiplications used by the disk transport.
struct BumpDensity {
  double lo = 0.0, hi = 1.0;
  Polynomial num;
  Polynomial den = Polynomial::constant(1.0);
};

using DensityComponent = std::variant<RationalDensity, TrigRationalDensity, BumpDensity>;

struct ComplexMeasure {
  std::vector<Atom> atoms;
  std::vector<DensityComponent> densities;
  // t-locations where some denominator nearly touches R; quadrature pre-splits
  // there. Populated by make_measure.
  std::vector<double> peak_hints;
};

inline bool same_atom_location(double t1, double t2) {
  return std::abs(t1 - t2) <= 1e-12 * std::max({1.0, std::abs(t1), std::abs(t2)});
}

// Validates invariants (finite TV structure, no real denominator zeros,
// distinct atom locations), merges/normalizes atoms, computes peak hints.
// min_degree_gap is 2 for measures on R; the disk module relaxes it to 0
// because the circle arc-length element supplies the decay.
ComplexMeasure make_measure(std::vector<Atom> atoms, std::vector<DensityComponent> densities,
                            int min_degree_gap = 2);

ComplexMeasure empty_measure();
// dt/(1+t^2), total variation pi.
ComplexMeasure lambda_tilde(cplx scale = cplx(1.0));

// Pointwise value of the absolutely continuous part at t.
cplx density_value(const ComplexMeasure& nu, double t);

double total_variation(const ComplexMeasure& nu, const QuadratureConfig& cfg = {});
cplx mass(const ComplexMeasure& nu, const QuadratureConfig& cfg = {});

// Sum over atoms of w*f(t) plus the integral of f against each density.
// f must be continuous and bounded on R.
cplx integrate_kernel(const ComplexMeasure& nu, const std::function<cplx(double)>& f,
                      const QuadratureConfig& cfg = {});

// Same integral for a rational f = fnum/fden with no real poles; this is the
// path every kernel integral in the library takes, because the product stays
// inside the closed-form density family (exact tails for oscillatory parts).
cplx integrate_kernel_rational(const ComplexMeasure& nu, const Polynomial& fnum,
                               const Polynomial& fden, const QuadratureConfig& cfg = {});

ComplexMeasure linear_combine(cplx alpha, const ComplexMeasure& nu1, cplx beta,
                              const ComplexMeasure& nu2);
ComplexMeasure conjugate_measure(const ComplexMeasure& nu);
std::pair<ComplexMeasure, ComplexMeasure> real_imag_parts(const ComplexMeasure& nu);

bool is_real_measure(const ComplexMeasure& nu);

}  // namespace qhkit
