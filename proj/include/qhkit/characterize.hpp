#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhkit/core.hpp"

namespace qhkit {

enum class ConditionVerdict { satisfied, violated, inconclusive };

struct ConditionReport {
  ConditionVerdict verdict = ConditionVerdict::inconclusive;
  std::optional<cplx> witness;  // sample point or parameter value evidencing a violation
  std::vector<std::pair<double, double>> trace;  // (parameter, estimate) pairs
  std::string detail;
};

struct GrowthSampleSpec {
  int angles = 16;
  int radii = 24;
  double r_min = 1e-3;
  double r_max = 1e3;
  int refinements = 5;  // each refinement widens the radius range tenfold
};

// Estimates sup |q(z)| |Im z| / (1 + |z|^2) over expanding log-polar grids.
ConditionReport check_growth(const BoundaryFn& f, const GrowthSampleSpec& spec = {},
                             const QuadratureConfig& cfg = {});

// Integral of |q(t+ir) - q(t-ir)| / (1+t^2) over the real line at fixed r,
// by truncation sweep over T in {10, 100, 1000, 10000}.
double regularity_integral(const BoundaryFn& f, double r, const QuadratureConfig& cfg = {});

ConditionReport check_regularity(const BoundaryFn& f, std::vector<double> r_schedule = {},
                                 const QuadratureConfig& cfg = {});

ConditionReport is_quasi_herglotz(const BoundaryFn& f, const QuadratureConfig& cfg = {});

ConditionReport check_real_symmetry(const BoundaryFn& f, std::vector<cplx> grid = {},
                                    const QuadratureConfig& cfg = {});

// Criteria for a function vanishing identically on one half-plane.
ConditionReport check_zero_lower(const DataTriple& d, std::vector<cplx> grid = {},
                                 const QuadratureConfig& cfg = {});
ConditionReport check_zero_upper(const DataTriple& d, std::vector<cplx> grid = {},
                                 const QuadratureConfig& cfg = {});

// Sign/support consequences for data already certified zero on a half-plane.
ConditionReport check_signed_zero_props(const DataTriple& d, const QuadratureConfig& cfg = {});

}  // namespace qhkit
