#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qhkit/measure.hpp"
#include "qhkit/rational_fn.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

// The representing data (a, b, nu) of a function a + b z + (1/pi) * integral
// of (1 + t z)/(t - z) against nu.
struct DataTriple {
  cplx a{};
  cplx b{};
  ComplexMeasure nu;
};

struct FromData {
  DataTriple data;
};

struct BuiltinFn {
  std::string name;
};

// A function given by one rational expression on each open half-plane.
struct PiecewiseRational {
  RationalFn upper;
  RationalFn lower;
};

using BoundaryFn = std::variant<FromData, BuiltinFn, PiecewiseRational>;

cplx kernel_Ktilde(cplx z, double t);
cplx kernel_K(cplx z, double t);
double poisson_P(cplx z, double t);
double poisson_Q(cplx z, double t);

cplx eval(const DataTriple& d, cplx z, const QuadratureConfig& cfg = {});
cplx eval_boundary_fn(const BoundaryFn& f, cplx z, const QuadratureConfig& cfg = {});

DataTriple conjugate_fn(const DataTriple& d);
std::pair<DataTriple, DataTriple> quasi_parts(const DataTriple& d);
bool is_ordinary_herglotz(const DataTriple& d);

DataTriple linear_combine(cplx alpha, const DataTriple& d1, cplx beta, const DataTriple& d2);

const std::vector<std::string>& builtin_names();
BoundaryFn make_builtin(const std::string& name);
std::optional<DataTriple> builtin_data(const std::string& name);

BoundaryFn from_data(DataTriple d);

}  // namespace qhkit
