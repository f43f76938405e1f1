#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace xtalk {

using cplx = std::complex<double>;

// 1 - e^{-x} without cancellation for small x.
inline double one_minus_exp(double x) { return -std::expm1(-x); }

// log(e^x - 1), safe against overflow for large x.
inline double log_expm1(double x) {
  if (x > 36.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

// phi2(x) = (e^x - 1 - x) / x^2.  Series fallback keeps the subtraction
// cancellation-free near zero; used by the pole/residue ramp response.
inline cplx phi2(cplx x) {
  if (std::abs(x) < 1e-3) {
    // 1/2 + x/6 + x^2/24 + x^3/120 + x^4/720, error ~ |x|^5/5040 < 2e-19
    return 0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0)));
  }
  return (std::exp(x) - 1.0 - x) / (x * x);
}

// Roots of s^2 + b s + c with real coefficients, stable quadratic formula.
inline std::pair<cplx, cplx> solve_quadratic(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    // avoid subtracting nearly equal quantities
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q;
    double r2 = (q != 0.0) ? c / q : -b - q;
    return {cplx(r1, 0.0), cplx(r2, 0.0)};
  }
  const double re = -0.5 * b;
  const double im = 0.5 * std::sqrt(-disc);
  return {cplx(re, im), cplx(re, -im)};
}

}  // namespace xtalk
