#include "qhkit/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace qhkit {

RationalFn::RationalFn(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(errc::domain, "division by zero polynomial");
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1.0);
    return;
  }
  Polynomial g = gcd_approx(num_, den_);
  if (g.degree() >= 1) {
    num_ = num_.divmod(g).first.trimmed(1e-12);
    den_ = den_.divmod(g).first.trimmed(1e-12);
    if (den_.is_zero()) fail(errc::domain, "division by zero polynomial");
    if (num_.is_zero()) {
      den_ = Polynomial::constant(1.0);
      return;
    }
  }
  cplx inv = 1.0 / den_.leading();
  den_ = den_ * inv;
  num_ = num_ * inv;
}

cplx RationalFn::operator()(cplx z) const {
  cplx v = num_(z) / den_(z);
  if (!finite(v)) fail(errc::pole, "rational denominator zero at evaluation point");
  return v;
}

RationalFn RationalFn::conj() const { return RationalFn(num_.conj(), den_.conj()); }

RationalFn RationalFn::derivative() const {
  return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFn operator+(const RationalFn& x, const RationalFn& y) {
  return RationalFn(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
}

RationalFn operator-(const RationalFn& x, const RationalFn& y) {
  return RationalFn(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
}

RationalFn operator*(const RationalFn& x, const RationalFn& y) {
  return RationalFn(x.num_ * y.num_, x.den_ * y.den_);
}

RationalFn operator/(const RationalFn& x, const RationalFn& y) {
  if (y.is_zero()) fail(errc::domain, "division by zero polynomial");
  return RationalFn(x.num_ * y.den_, x.den_ * y.num_);
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFn RationalFn::pow(long e) const {
  if (e == 0) return RationalFn::constant(1.0);
  if (e < 0) {
    if (is_zero()) fail(errc::domain, "division by zero polynomial");
    return RationalFn(den_, num_).pow(-e);
  }
  RationalFn acc = RationalFn::constant(1.0), base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = e > 1 ? base * base : base;
    e >>= 1;
  }
  return acc;
}

bool approx_equal(const RationalFn& x, const RationalFn& y, double tol) {
  static const cplx pts[] = {{0.3, 0.9},  {-1.2, 0.4}, {2.2, -1.3}, {-0.7, -2.1},
                             {1.6, 2.8},  {0.05, 0.6}, {-3.4, 1.1}, {4.1, -0.2},
                             {-0.9, 3.3}, {1.1, -4.2}, {2.9, 0.8},  {-2.2, -0.5}};
  int used = 0;
  for (cplx z : pts) {
    cplx dn_x = x.den()(z), dn_y = y.den()(z);
    if (std::abs(dn_x) < 1e-8 || std::abs(dn_y) < 1e-8) continue;
    cplx vx = x.num()(z) / dn_x, vy = y.num()(z) / dn_y;
    if (std::abs(vx - vy) > tol * (1.0 + std::abs(vx))) return false;
    ++used;
  }
  return used >= 6;
}

namespace {

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  RationalFn run() {
    RationalFn v = expr();
    skip_ws();
    if (pos_ != s_.size()) err("an operator (+, -, *, /, ^) or end of input");
    return v;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void err(const std::string& expected) {
    fail(errc::parse,
         "parse error at position " + std::to_string(pos_) + ": expected " + expected);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFn expr() {
    RationalFn v = term();
    for (;;) {
      if (consume('+'))
        v = v + term();
      else if (consume('-'))
        v = v - term();
      else
        return v;
    }
  }

  RationalFn term() {
    RationalFn v = factor();
    for (;;) {
      if (consume('*'))
        v = v * factor();
      else if (consume('/'))
        v = v / factor();
      else
        return v;
    }
  }

  RationalFn factor() {
    if (consume('-')) return -factor();
    return power();
  }

  RationalFn power() {
    RationalFn base = primary();
    if (consume('^')) return base.pow(exponent());
    return base;
  }

  long exponent() {
    skip_ws();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) err("an integer exponent");
    long e = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, e);
    return neg ? -e : e;
  }

  RationalFn primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      RationalFn v = expr();
      if (!consume(')')) err("')'");
      return v;
    }
    if (c == 'z') {
      ++pos_;
      return RationalFn::variable();
    }
    if (c == 'i') {
      ++pos_;
      return RationalFn::constant(cplx(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    err("a number, 'z', 'i', or '('");
  }

  RationalFn number() {
    size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      size_t after_sign = pos_;
      digits();
      if (pos_ == after_sign) pos_ = mark;
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc()) err("a numeric literal");
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return RationalFn::constant(cplx(0.0, v));
    }
    return RationalFn::constant(cplx(v, 0.0));
  }
};

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

struct CoeffText {
  bool negative;
  std::string magnitude;  // without sign; empty means implicit 1
};

CoeffText coeff_text(cplx c, bool unit_implicit) {
  if (c.imag() == 0.0) {
    double a = std::abs(c.real());
    if (unit_implicit && a == 1.0) return {c.real() < 0.0, ""};
    return {c.real() < 0.0, format_double(a)};
  }
  if (c.real() == 0.0) return {c.imag() < 0.0, format_double(std::abs(c.imag())) + "i"};
  std::string s = "(" + format_double(c.real()) + (c.imag() < 0.0 ? "-" : "+") +
                  format_double(std::abs(c.imag())) + "i)";
  return {false, s};
}

}  // namespace

std::string print_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    cplx c = p.coeff(k);
    if (c == cplx(0.0)) continue;
    CoeffText ct = coeff_text(c, k > 0);
    if (out.empty())
      out = ct.negative ? "-" : "";
    else
      out += ct.negative ? " - " : " + ";
    std::string var = k == 0 ? "" : (k == 1 ? "z" : "z^" + std::to_string(k));
    if (ct.magnitude.empty() && var.empty()) ct.magnitude = "1.0";
    out += ct.magnitude;
    if (!ct.magnitude.empty() && !var.empty()) out += "*";
    out += var;
  }
  return out;
}

std::string print_rational(const RationalFn& r) {
  if (r.is_polynomial()) return print_polynomial(r.num() * (1.0 / r.den().coeff(0)));
  return "(" + print_polynomial(r.num()) + ")/(" + print_polynomial(r.den()) + ")";
}

RationalFn parse_rational(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

double tau_real(cplx root) { return 1e-9 * (1.0 + std::abs(root)); }

std::string at_root(cplx r) {
  return " at z = " + format_double(r.real()) +
         (r.imag() < 0.0 ? " - " : " + ") + format_double(std::abs(r.imag())) + "i";
}

}  // namespace

ClassifyResult classify_upper_zero_lower(const RationalFn& r) {
  if (r.is_zero()) return {Verdict::accepted, {}, "identically zero"};
  if (r.num().degree() > r.den().degree())
    return {Verdict::rejected, {}, "degree of numerator exceeds degree of denominator"};
  ClassifyResult near{Verdict::inconclusive, {}, ""};
  if (r.den().degree() >= 1) {
    for (const RootCluster& rc : roots(r.den())) {
      double tau = tau_real(rc.value);
      if (rc.value.imag() >= -tau) {
        bool real_pole = std::abs(rc.value.imag()) <= tau;
        return {Verdict::rejected,
                {rc.value},
                (real_pole ? "real pole" : "pole in the upper half-plane") + at_root(rc.value)};
      }
      if (rc.value.imag() > -3.0 * tau) {
        near.offending_roots.push_back(rc.value);
        near.detail = "pole too close to the real axis to classify" + at_root(rc.value);
      }
    }
  }
  if (!near.offending_roots.empty()) return near;
  return {Verdict::accepted, {}, "all poles lie in the open lower half-plane"};
}

ClassifyResult classify_both_halves(const RationalFn& r) {
  if (r.is_zero()) return {Verdict::accepted, {}, "identically zero"};
  if (r.num().degree() > r.den().degree() + 1)
    return {Verdict::rejected, {},
            "degree of numerator exceeds degree of denominator plus one"};
  ClassifyResult near{Verdict::inconclusive, {}, ""};
  if (r.den().degree() >= 1) {
    for (const RootCluster& rc : roots(r.den())) {
      double tau = tau_real(rc.value);
      double im = std::abs(rc.value.imag());
      if (im <= tau) {
        if (rc.multiplicity > 1)
          return {Verdict::rejected, {rc.value}, "double real pole" + at_root(rc.value)};
      } else if (im <= 3.0 * tau) {
        near.offending_roots.push_back(rc.value);
        near.detail = "pole too close to the real axis to classify" + at_root(rc.value);
      } else {
        return {Verdict::rejected, {rc.value}, "non-real pole" + at_root(rc.value)};
      }
    }
  }
  if (!near.offending_roots.empty()) return near;
  return {Verdict::accepted, {}, "all poles are simple and real"};
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

namespace {

struct HalfSplit {
  cplx b{};
  cplx a{};
  Polynomial rem;  // proper part rem / den
  Polynomial den;
};

HalfSplit split_half(const RationalFn& r, const char* side) {
  if (r.num().degree() > r.den().degree() + 1)
    fail(errc::classify, std::string(side) +
                             " expression: degree of numerator exceeds degree of denominator "
                             "plus one, so the non-tangential b limit diverges");
  auto [q, rem] = r.num().divmod(r.den());
  return {q.coeff(1), q.coeff(0), rem.trimmed(1e-13), r.den()};
}

struct RealPole {
  double t;
  cplx residue;
};

struct PoleAnalysis {
  std::vector<RealPole> real_poles;
  std::vector<RootCluster> complex_poles;
};

PoleAnalysis analyze_poles(const HalfSplit& h, bool upper_side) {
  PoleAnalysis out;
  if (h.den.degree() < 1) return out;
  Polynomial dprime = h.den.derivative();
  for (const RootCluster& rc : roots(h.den)) {
    double tau = tau_real(rc.value);
    if (std::abs(rc.value.imag()) <= tau) {
      if (rc.multiplicity > 1) fail(errc::classify, "double real pole" + at_root(rc.value));
      double t = rc.value.real();
      out.real_poles.push_back({t, h.rem(t) / dprime(t)});
    } else {
      if (upper_side ? rc.value.imag() > 0.0 : rc.value.imag() < 0.0)
        fail(errc::classify, std::string(upper_side ? "upper" : "lower") +
                                 " expression has a pole inside its own half-plane" +
                                 at_root(rc.value));
      out.complex_poles.push_back(rc);
    }
  }
  std::sort(out.real_poles.begin(), out.real_poles.end(),
            [](const RealPole& x, const RealPole& y) { return x.t < y.t; });
  return out;
}

// Coefficients c_1..c_m of the singular part sum c_k / (z - p)^k of num/den at
// a pole p of multiplicity m, by Taylor shift and power-series division.
std::vector<cplx> singular_coefficients(const Polynomial& num, const Polynomial& den, cplx p,
                                        int m) {
  Polynomial ns = num.shifted(p);
  Polynomial ds = den.shifted(p);
  std::vector<cplx> g(size_t(ds.degree() + 1 - m));
  for (size_t k = 0; k < g.size(); ++k) g[k] = ds.coeff(int(k) + m);
  std::vector<cplx> h(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    cplx acc = ns.coeff(k);
    for (int j = 0; j < k; ++j) acc -= h[size_t(j)] * g[size_t(k - j)];
    h[size_t(k)] = acc / g[0];
  }
  std::vector<cplx> c(size_t(m) + 1);
  for (int j = 1; j <= m; ++j) c[size_t(j)] = h[size_t(m - j)];
  return c;
}

RationalFn assemble_complex_part(const HalfSplit& h, const std::vector<RootCluster>& poles) {
  RationalFn part;
  for (const RootCluster& rc : poles) {
    std::vector<cplx> c = singular_coefficients(h.rem, h.den, rc.value, rc.multiplicity);
    std::vector<cplx> num_u(size_t(rc.multiplicity));
    for (int k = 1; k <= rc.multiplicity; ++k)
      num_u[size_t(rc.multiplicity - k)] = c[size_t(k)];
    Polynomial num = Polynomial(std::move(num_u)).shifted(-rc.value);
    Polynomial den = Polynomial::from_roots(std::vector<cplx>(size_t(rc.multiplicity), rc.value));
    part = part + RationalFn(num, den);
  }
  return part;
}

RationalFn assemble_common(const std::vector<RealPole>& poles) {
  if (poles.empty()) return RationalFn();
  std::vector<cplx> locs;
  for (const RealPole& p : poles) locs.push_back(cplx(p.t, 0.0));
  Polynomial den = Polynomial::from_roots(locs);
  Polynomial num;
  for (size_t i = 0; i < poles.size(); ++i) {
    std::vector<cplx> others;
    for (size_t j = 0; j < poles.size(); ++j)
      if (j != i) others.push_back(locs[j]);
    num = num + Polynomial::from_roots(others) * poles[i].residue;
  }
  return RationalFn(num, den);
}

cplx reconstruct(const Decomposition& d, cplx z, bool upper_side) {
  cplx v = d.b * z + (upper_side ? d.a_upper : d.a_lower);
  if (!d.common.is_zero()) v += d.common(z);
  const RationalFn& part = upper_side ? d.upper_part : d.lower_part;
  if (!part.is_zero()) v += part(z);
  return v;
}

}  // namespace

cplx residue_at_simple_pole(const RationalFn& r, cplx pole) {
  return r.num()(pole) / r.den().derivative()(pole);
}

Decomposition decompose(const RationalPair& pair) {
  HalfSplit up = split_half(pair.upper, "upper");
  HalfSplit lo = split_half(pair.lower, "lower");

  if (std::abs(up.b - lo.b) > 1e-9 * (1.0 + std::abs(up.b) + std::abs(lo.b)))
    fail(errc::classify, "unequal b limits between the half-planes");

  PoleAnalysis pa_up = analyze_poles(up, true);
  PoleAnalysis pa_lo = analyze_poles(lo, false);

  if (pa_up.real_poles.size() != pa_lo.real_poles.size())
    fail(errc::classify, "real pole present in only one half-plane expression");
  std::vector<RealPole> shared;
  for (size_t i = 0; i < pa_up.real_poles.size(); ++i) {
    const RealPole& u = pa_up.real_poles[i];
    const RealPole& l = pa_lo.real_poles[i];
    if (std::abs(u.t - l.t) > 1e-8 * (1.0 + std::abs(u.t)))
      fail(errc::classify, "real pole present in only one half-plane expression");
    if (std::abs(u.residue - l.residue) >
        1e-9 * (1.0 + std::abs(u.residue) + std::abs(l.residue)))
      fail(errc::classify, "residue mismatch at a shared real pole");
    shared.push_back({0.5 * (u.t + l.t), 0.5 * (u.residue + l.residue)});
  }

  Decomposition d;
  d.b = 0.5 * (up.b + lo.b);
  d.a_upper = up.a;
  d.a_lower = lo.a;
  d.common = assemble_common(shared);
  d.upper_part = assemble_complex_part(up, pa_up.complex_poles);
  d.lower_part = assemble_complex_part(lo, pa_lo.complex_poles);

  for (int k = 0; k < 20; ++k) {
    double re = -2.9 + 0.61 * k;
    double im = 0.3 + 0.17 * k;
    for (int sgn : {1, -1}) {
      cplx z(re, sgn * im);
      const RationalFn& ref = sgn > 0 ? pair.upper : pair.lower;
      if (std::abs(ref.den()(z)) < 1e-6) continue;
      cplx want = ref.num()(z) / ref.den()(z);
      cplx got = reconstruct(d, z, sgn > 0);
      if (std::abs(got - want) > 1e-8 * (1.0 + std::abs(want)))
        fail(errc::classify, "decomposition reconstruction residual too large");
    }
  }
  return d;
}

ClassifyResult classify_pair(const RationalPair& pair) {
  try {
    decompose(pair);
  } catch (const error& e) {
    if (e.kind() == errc::classify) return {Verdict::rejected, {}, e.what()};
    throw;
  }
  return {Verdict::accepted, {}, "decomposes into the three admissible parts"};
}

DataTriple rational_to_data(const RationalPair& pair, const QuadratureConfig& cfg) {
  Decomposition dec = decompose(pair);

  std::vector<Atom> atoms;
  if (!dec.common.is_zero() && dec.common.den().degree() >= 1) {
    Polynomial dprime = dec.common.den().derivative();
    for (const RootCluster& rc : roots(dec.common.den())) {
      double t = rc.value.real();
      cplx res = dec.common.num()(t) / dprime(t);
      atoms.push_back({t, -pi * res / (1.0 + t * t)});
    }
  }

  RationalFn diff =
      (RationalFn::constant(dec.a_upper - dec.a_lower) + dec.upper_part) - dec.lower_part;
  std::vector<DensityComponent> dens;
  if (!diff.is_zero()) {
    RationalFn density(diff.num() * cplx(0.0, -0.5),
                       diff.den() * Polynomial({cplx(1.0), cplx(0.0), cplx(1.0)}));
    dens.push_back(RationalDensity{density.num(), density.den()});
  }

  cplx a = 0.5 * (pair.upper(cplx(0.0, 1.0)) + pair.lower(cplx(0.0, -1.0)));
  DataTriple d{a, dec.b, make_measure(std::move(atoms), std::move(dens))};

  for (double im : {0.7, 1.7}) {
    for (double re : {-2.3, -0.9, 0.4, 1.8, 3.1}) {
      for (int sgn : {1, -1}) {
        cplx z(re, sgn * im);
        cplx want = sgn > 0 ? pair.upper(z) : pair.lower(z);
        cplx got = eval(d, z, cfg);
        if (std::abs(got - want) > 1e-7 * (1.0 + std::abs(want)))
          fail(errc::recovery,
               "converted data fails to reproduce the function on the validation grid");
      }
    }
  }
  return d;
}

}  // namespace qhkit
