#pragma once

#include <vector>

#include "qhkit/characterize.hpp"
#include "qhkit/core.hpp"

namespace qhkit {

// Riemann-sphere point: the point at infinity is an enumerated state, never a
// floating-point encoding.
struct ExtComplex {
  cplx value{};
  bool is_infinity = false;

  static ExtComplex infinity() { return {cplx(0.0), true}; }
  static ExtComplex of(cplx v) { return {v, false}; }
};

struct CircleAtom {
  double angle;  // in (0, 2*pi)
  cplx w;
};

// Measure on the unit circle in the angle variable s, with the mass at angle
// zero held separately. Densities are stored through the substitution
// t = -cot(s/2): a component value m(t) integrates as
//   integral of F d(sigma) over (0,2pi)  =  integral of F(s(t)) m(t) 2/(1+t^2) dt over R,
// so the stored rational family is closed under both transport directions.
struct CircleMeasure {
  cplx atom_at_1{};
  std::vector<CircleAtom> atoms;
  std::vector<DensityComponent> densities;
};

struct DiskData {
  cplx c{};
  CircleMeasure sigma;
};

// psi: unit disk -> upper half-plane, zeta -> i(1+zeta)/(1-zeta).
cplx cayley(const ExtComplex& zeta);
// phi: xi -> (xi - i)/(xi + i), inverse of psi.
cplx inverse_cayley(const ExtComplex& xi);

cplx cauchy_transform(const CircleMeasure& sigma, const ExtComplex& tau,
                      const QuadratureConfig& cfg = {});

DiskData to_disk(const DataTriple& d, const QuadratureConfig& cfg = {});
DataTriple from_disk(const DiskData& e, const QuadratureConfig& cfg = {});

ConditionReport identity_check(const DataTriple& d, std::vector<cplx> grid = {},
                               const QuadratureConfig& cfg = {});

double circle_total_variation(const CircleMeasure& sigma, const QuadratureConfig& cfg = {});

}  // namespace qhkit
