#pragma once

#include "qhkit/polynomial.hpp"
#include "qhkit/types.hpp"

namespace qhkit {

// Rational function in one variable, kept in reduced form with a monic
// denominator. The zero function is represented as 0/1.
class RationalFn {
 public:
  RationalFn() : num_(Polynomial()), den_(Polynomial::constant(1.0)) {}
  RationalFn(Polynomial num, Polynomial den);

  static RationalFn constant(cplx c) { return RationalFn(Polynomial::constant(c), Polynomial::constant(1.0)); }
  static RationalFn variable() { return RationalFn(Polynomial::variable(), Polynomial::constant(1.0)); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  cplx operator()(cplx z) const;

  RationalFn conj() const;
  RationalFn derivative() const;

  friend RationalFn operator+(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator-(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator*(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator/(const RationalFn& x, const RationalFn& y);
  RationalFn operator-() const;
  RationalFn pow(long e) const;

 private:
  Polynomial num_, den_;
};

bool approx_equal(const RationalFn& x, const RationalFn& y, double tol = 1e-9);

}  // namespace qhkit
