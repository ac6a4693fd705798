#pragma once

#include <charconv>
#include <complex>
#include <stdexcept>
#include <string>

namespace qhkit {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Every throwing path in the library uses one of these categories so the CLI
// can map failures onto stable exit codes.
enum class errc {
  domain,       // argument outside the mathematical domain (z real, |tau| = 1, ...)
  quadrature,   // adaptive integration failed to converge
  parse,        // expression or JSON syntax error
  pole,         // evaluation hit a pole
  classify,     // a rational classification condition is violated
  recovery,     // recovered data fails validation
  convergence,  // iterative method (roots, extrapolation) did not converge
};

class error : public std::runtime_error {
public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 50;  // maximum bisection depth per interval
};

// Geometric schedule y_k = y0 * r^k used for every vertical-ray limit.
struct LimitSchedule {
  double y0 = 0.5;
  double r = 0.5;
  int n = 20;
  int extrapolation_order = 2;
};

// Result of a Richardson-extrapolated limit along a geometric schedule.
struct LimitResult {
  cplx value{0.0, 0.0};
  double error = 0.0;  // estimated, from the extrapolation tableau
  bool diverged = false;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Locale-independent shortest round-trip formatting; integers get a trailing
// ".0" so the output stays unambiguously floating-point.
inline std::string format_double(double v) {
  if (v == 0.0) return "0.0";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

}  // namespace qhkit
