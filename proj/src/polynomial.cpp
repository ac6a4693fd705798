#include "qhkit/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace qhkit {

namespace {
constexpr double kStripEps = 0.0;  // exact zeros only; callers use trimmed() for fuzz
}

void Polynomial::strip() {
  while (!c_.empty() && std::abs(c_.back()) <= kStripEps) c_.pop_back();
  for (const cplx& v : c_)
    if (!finite(v)) fail(errc::domain, "polynomial coefficient is not finite");
}

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots) {
  Polynomial p = constant(1.0);
  for (cplx r : roots) p = p * Polynomial({-r, cplx(1.0)});
  return p;
}

double Polynomial::norm1() const {
  double s = 0.0;
  for (const cplx& v : c_) s += std::abs(v);
  return s;
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (size_t k = c_.size(); k-- > 0;) acc = acc * z + c_[k];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<cplx> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::conj() const {
  std::vector<cplx> d(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) d[k] = std::conj(c_[k]);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(cplx z0) const {
  // Repeated synthetic division by (z - z0) yields the Taylor coefficients.
  std::vector<cplx> a = c_;
  int n = int(a.size()) - 1;
  for (int j = 0; j < n; ++j)
    for (int k = n - 1; k >= j; --k) a[size_t(k)] += z0 * a[size_t(k) + 1];
  return Polynomial(std::move(a));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<cplx> d(std::max(c_.size(), o.c_.size()), cplx(0.0));
  for (size_t k = 0; k < c_.size(); ++k) d[k] += c_[k];
  for (size_t k = 0; k < o.c_.size(); ++k) d[k] += o.c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (o * cplx(-1.0)); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial();
  std::vector<cplx> d(c_.size() + o.c_.size() - 1, cplx(0.0));
  for (size_t j = 0; j < c_.size(); ++j)
    for (size_t k = 0; k < o.c_.size(); ++k) d[j + k] += c_[j] * o.c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(cplx s) const {
  std::vector<cplx> d(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) d[k] = c_[k] * s;
  return Polynomial(std::move(d));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) fail(errc::domain, "division by the zero polynomial");
  if (degree() < d.degree()) return {Polynomial(), *this};
  std::vector<cplx> rem = c_;
  std::vector<cplx> quot(size_t(degree() - d.degree()) + 1, cplx(0.0));
  cplx lead = d.leading();
  for (int k = degree(); k >= d.degree(); --k) {
    cplx q = rem[size_t(k)] / lead;
    quot[size_t(k - d.degree())] = q;
    for (int j = 0; j <= d.degree(); ++j) rem[size_t(k - d.degree() + j)] -= q * d.coeff(j);
  }
  rem.resize(size_t(std::max(d.degree(), 0)));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::trimmed(double eps) const {
  double cut = eps * std::max(norm1(), 1e-300);
  std::vector<cplx> d = c_;
  while (!d.empty() && std::abs(d.back()) <= cut) d.pop_back();
  for (cplx& v : d)
    if (std::abs(v) <= cut) v = 0.0;
  return Polynomial(std::move(d));
}

namespace {

// One Aberth-Ehrlich sweep; returns the largest correction applied.
double aberth_sweep(const Polynomial& p, const Polynomial& dp, std::vector<cplx>& zs) {
  double worst = 0.0;
  for (size_t k = 0; k < zs.size(); ++k) {
    cplx pv = p(zs[k]);
    cplx dv = dp(zs[k]);
    cplx w = (dv == cplx(0.0)) ? cplx(0.0) : pv / dv;
    cplx s = 0.0;
    for (size_t j = 0; j < zs.size(); ++j) {
      if (j == k) continue;
      cplx diff = zs[k] - zs[j];
      if (std::abs(diff) < 1e-300) diff = cplx(1e-300);
      s += 1.0 / diff;
    }
    cplx denom = 1.0 - w * s;
    cplx corr = (std::abs(denom) < 1e-300) ? w : w / denom;
    zs[k] -= corr;
    worst = std::max(worst, std::abs(corr));
  }
  return worst;
}

}  // namespace

std::vector<RootCluster> roots(const Polynomial& p) {
  if (p.degree() < 1) fail(errc::domain, "roots() needs degree >= 1");

  // Factor out exact roots at the origin first.
  std::vector<cplx> c = p.coeffs();
  int zero_mult = 0;
  while (!c.empty() && c.front() == cplx(0.0)) {
    c.erase(c.begin());
    ++zero_mult;
  }
  Polynomial q{std::vector<cplx>(c)};
  std::vector<RootCluster> out;
  if (zero_mult > 0) out.push_back({cplx(0.0), zero_mult});
  int n = q.degree();
  auto by_position = [](const RootCluster& a, const RootCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  };
  if (n < 1) return out;

  if (n <= 2) {
    if (n == 1) {
      out.push_back({-q.coeff(0) / q.coeff(1), 1});
    } else {
      cplx a2 = q.coeff(2), b1 = q.coeff(1), c0 = q.coeff(0);
      cplx s = std::sqrt(b1 * b1 - 4.0 * a2 * c0);
      cplx u = std::abs(b1 + s) >= std::abs(b1 - s) ? b1 + s : b1 - s;
      if (std::abs(u) < 1e-300) {
        out.push_back({-b1 / (2.0 * a2), 2});
      } else {
        cplx r1 = -u / (2.0 * a2);
        cplx r2 = c0 / (a2 * r1);
        if (std::abs(r1 - r2) <= 1e-7 * (1.0 + std::abs(r1))) {
          out.push_back({0.5 * (r1 + r2), 2});
        } else {
          out.push_back({r1, 1});
          out.push_back({r2, 1});
        }
      }
    }
    std::sort(out.begin(), out.end(), by_position);
    return out;
  }

  // Initial guesses on a perturbed circle sized from the coefficient ratio.
  double radius = 0.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(q.coeff(k) / q.leading()), 1.0 / double(n - k)));
  radius = std::max(radius, 0.5) * 1.2;
  std::vector<cplx> zs(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * pi * double(k) / double(n) + 0.39 / double(n) + 0.17;
    zs[size_t(k)] = radius * cplx(std::cos(ang), std::sin(ang));
  }

  Polynomial dq = q.derivative();
  double pnorm = q.norm1();
  bool converged = false;
  double prev = std::numeric_limits<double>::max();
  int stall = 0;
  for (int iter = 0; iter < 600; ++iter) {
    double step = aberth_sweep(q, dq, zs);
    double resid = 0.0;
    for (cplx z : zs) {
      double scale = std::pow(std::max(1.0, std::abs(z)), double(n));
      resid = std::max(resid, std::abs(q(z)) / (pnorm * scale));
    }
    if (resid <= 1e-13) {
      converged = true;
      break;
    }
    // Multiple-root clusters stall at a residual floor ~ tol^(1/m); accept
    // once the steps stop shrinking yet the residual is already tiny.
    if (step >= 0.5 * prev) {
      if (++stall > 40 && resid <= 1e-8) {
        converged = true;
        break;
      }
    } else {
      stall = 0;
    }
    prev = step;
  }
  if (!converged) fail(errc::convergence, "root iteration did not converge");

  // Cluster with the fixed radius plus the Gerschgorin-style inclusion radii
  // n*|p/p'|, which grow with multiplicity and merge stalled clusters.
  std::vector<double> incl(zs.size(), 0.0);
  for (size_t k = 0; k < zs.size(); ++k) {
    cplx dv = dq(zs[k]);
    incl[k] = (std::abs(dv) < 1e-300) ? 1e-6 : double(n) * std::abs(q(zs[k]) / dv);
  }
  std::vector<bool> used(zs.size(), false);
  for (size_t k = 0; k < zs.size(); ++k) {
    if (used[k]) continue;
    std::vector<size_t> cluster{k};
    used[k] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t j = 0; j < zs.size(); ++j) {
        if (used[j]) continue;
        for (size_t m : cluster) {
          double tol = std::max(1e-8 * (1.0 + std::abs(zs[m])), 4.0 * (incl[m] + incl[j]));
          if (std::abs(zs[m] - zs[j]) <= tol) {
            cluster.push_back(j);
            used[j] = true;
            grew = true;
            break;
          }
        }
      }
    }
    cplx centroid = 0.0;
    for (size_t m : cluster) centroid += zs[m];
    centroid /= double(cluster.size());
    out.push_back({centroid, int(cluster.size())});
  }
  std::sort(out.begin(), out.end(), by_position);
  return out;
}

Polynomial gcd_approx(Polynomial a, Polynomial b) {
  const double cutoff = 1e-10;
  a = a.trimmed(cutoff);
  b = b.trimmed(cutoff);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    Polynomial r = a.divmod(b).second.trimmed(cutoff);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return Polynomial::constant(1.0);
  return a * (1.0 / a.leading());
}

}  // namespace qhkit
