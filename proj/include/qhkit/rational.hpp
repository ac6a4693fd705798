#pragma once

#include <string>
#include <vector>

#include "qhkit/core.hpp"
#include "qhkit/rational_fn.hpp"

namespace qhkit {

enum class Verdict { accepted, rejected, inconclusive };

struct ClassifyResult {
  Verdict verdict = Verdict::accepted;
  std::vector<cplx> offending_roots;
  std::string detail;
};

struct RationalPair {
  RationalFn upper;
  RationalFn lower;
};

// q(z) = b z + common(z) + (a_upper + upper_part(z)) on the upper half-plane
//      = b z + common(z) + (a_lower + lower_part(z)) on the lower half-plane
// where common has only simple real poles shared by both halves, upper_part
// has poles only in the lower half-plane, and lower_part only in the upper.
struct Decomposition {
  cplx b{};
  RationalFn common;
  cplx a_upper{};
  RationalFn upper_part;
  cplx a_lower{};
  RationalFn lower_part;
};

RationalFn parse_rational(const std::string& text);
std::string print_rational(const RationalFn& r);
std::string print_polynomial(const Polynomial& p);

ClassifyResult classify_upper_zero_lower(const RationalFn& r);
ClassifyResult classify_both_halves(const RationalFn& r);
ClassifyResult classify_pair(const RationalPair& pair);

Decomposition decompose(const RationalPair& pair);
DataTriple rational_to_data(const RationalPair& pair, const QuadratureConfig& cfg = {});

cplx residue_at_simple_pole(const RationalFn& r, cplx pole);

}  // namespace qhkit
