#pragma once

#include <limits>
#include <vector>

#include "qhkit/types.hpp"

namespace qhkit {

// Dense univariate polynomial with complex coefficients, ascending degree.
// The zero polynomial has an empty coefficient vector and degree kDegZero.
class Polynomial {
public:
  static constexpr int kDegZero = std::numeric_limits<int>::min();

  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { strip(); }
  static Polynomial constant(cplx v) { return Polynomial({v}); }
  static Polynomial variable() { return Polynomial({cplx(0.0), cplx(1.0)}); }
  static Polynomial from_roots(const std::vector<cplx>& roots);

  const std::vector<cplx>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? kDegZero : int(c_.size()) - 1; }
  cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }
  cplx coeff(int k) const { return (k >= 0 && k < int(c_.size())) ? c_[size_t(k)] : cplx(0.0); }
  double norm1() const;

  cplx operator()(cplx z) const;
  Polynomial derivative() const;
  Polynomial conj() const;
  // Taylor coefficients around z0, i.e. coefficients of p(z0 + w) in w.
  Polynomial shifted(cplx z0) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx s) const;
  Polynomial operator-() const { return *this * cplx(-1.0); }

  // Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;

  // Drops trailing coefficients of magnitude <= eps * norm1().
  Polynomial trimmed(double eps) const;

private:
  void strip();
  std::vector<cplx> c_;
};

struct RootCluster {
  cplx value;
  int multiplicity;
};

// Aberth-Ehrlich simultaneous iteration; clusters nearby iterates into
// multiple roots. Throws errc::convergence when the residuals stall.
std::vector<RootCluster> roots(const Polynomial& p);

// Monic approximate GCD via the Euclidean remainder sequence with
// coefficient cutoff 1e-10 * norm.
Polynomial gcd_approx(Polynomial a, Polynomial b);

}  // namespace qhkit
