#pragma once

#include <cmath>
#include <functional>

#include "trappair/errors.hpp"

namespace trappair {

//! Brent-style bracketed root finder.  f(lo) and f(hi) must have opposite
//! signs.  Converges to |interval| <= xtol or |f| <= ftol.
template <typename F>
double find_root_bracketed(F&& f, double lo, double hi, double flo, double fhi,
                           double xtol = 1e-14, double ftol = 0.0,
                           int max_iter = 200) {
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericError("find_root_bracketed: endpoints do not bracket a root");

  double a = lo, b = hi, fa = flo, fb = fhi;
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= ftol)
      return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic / secant step
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw NumericError("find_root_bracketed: no convergence", std::abs(fb));
}

template <typename F>
double find_root_bracketed(F&& f, double lo, double hi, double xtol = 1e-14,
                           double ftol = 0.0, int max_iter = 200) {
  return find_root_bracketed(f, lo, hi, f(lo), f(hi), xtol, ftol, max_iter);
}

} // namespace trappair
