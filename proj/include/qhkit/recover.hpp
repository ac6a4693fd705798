#pragma once

#include <functional>
#include <vector>

#include "qhkit/core.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

// Richardson extrapolation of lim_{y -> 0+} g(y) along the geometric
// schedule y_k = y0 * r^k, with divergence detection.
LimitResult extrapolate_limit(const std::function<cplx(double)>& g, const LimitSchedule& sched);

cplx extract_a(const BoundaryFn& f, const QuadratureConfig& cfg = {});

LimitResult extract_b_detail(const BoundaryFn& f, const LimitSchedule& sched = {},
                             const QuadratureConfig& cfg = {});
cplx extract_b(const BoundaryFn& f, const LimitSchedule& sched = {},
               const QuadratureConfig& cfg = {});

cplx extract_b_via_mass(const BoundaryFn& f, const ComplexMeasure& nu,
                        const QuadratureConfig& cfg = {});

LimitResult recover_density_detail(const BoundaryFn& f, double x, const LimitSchedule& sched = {},
                                   const QuadratureConfig& cfg = {});
cplx recover_density(const BoundaryFn& f, double x, const LimitSchedule& sched = {},
                     const QuadratureConfig& cfg = {});

cplx recover_atom(const BoundaryFn& f, double t0, const LimitSchedule& sched = {},
                  const QuadratureConfig& cfg = {});

cplx higher_order_vanishing(const BoundaryFn& f, double t0, int m, const LimitSchedule& sched = {},
                            const QuadratureConfig& cfg = {});

struct RecoverySpec {
  enum class Tail { none, inverse_quadratic };
  std::vector<double> candidate_atoms;
  double window_lo = -10.0;
  double window_hi = 10.0;
  double step = 0.05;
  Tail tail = Tail::inverse_quadratic;
  // Schedules for the boundary limits; coarser than the default because the
  // limits here are analytic in y and sampled at hundreds of grid points.
  LimitSchedule density_schedule{0.25, 0.5, 8, 2};
  LimitSchedule atom_schedule{0.25, 0.5, 10, 2};
};

struct RecoveryReport {
  DataTriple data;
  double max_residual = 0.0;  // on the evaluation validation grid
};

RecoveryReport recover_data_detail(const BoundaryFn& f, const RecoverySpec& spec = {},
                                   const LimitSchedule& b_sched = {},
                                   const QuadratureConfig& cfg = {});
DataTriple recover_data(const BoundaryFn& f, const RecoverySpec& spec = {},
                        const LimitSchedule& b_sched = {}, const QuadratureConfig& cfg = {});

}  // namespace qhkit
