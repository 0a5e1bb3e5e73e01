#pragma once

// Scalar special-function kernels: log-gamma with sign, gamma ratios valid
// between poles on the negative axis, digamma, the Kummer function
// U(a, 3/2, x), Laguerre and Legendre polynomials.  All kernels are
// deterministic and reentrant.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/quadrature.hpp"

namespace trappair {

namespace detail {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
  return x <= 0.5 && std::abs(x - std::rint(x)) < tol && std::rint(x) <= 0.0;
}

// log|Gamma(x)| with the sign of Gamma(x); x must not be a pole.
inline long double log_abs_gamma_ld(long double x, int& sign) {
  if (x > 0.0L) {
    sign = 1;
    return std::lgamma(x);
  }
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  long double r = x - std::floor(x); // in (0,1) away from poles
  long double s = std::sin(kPiL * r);
  sign = (static_cast<std::int64_t>(std::floor(x)) % 2 == 0) ? 1 : -1;
  return std::log(kPiL) - std::log(s) - std::lgamma(1.0L - x);
}

inline long double rgamma_ld(long double x) {
  if (x <= 0.5L && std::abs(x - std::rint(x)) < 1e-270L)
    return 0.0L; // pole of Gamma -> zero of 1/Gamma
  int sign = 1;
  long double la = log_abs_gamma_ld(x, sign);
  return sign * std::exp(-la);
}

inline long double laguerre_ld(int n, long double alpha, long double x) {
  if (n == 0)
    return 1.0L;
  long double lm1 = 1.0L;
  long double l = 1.0L + alpha - x;
  for (int k = 1; k < n; ++k) {
    long double lp1 = ((2.0L * k + 1.0L + alpha - x) * l - (k + alpha) * lm1) /
                      (k + 1.0L);
    lm1 = l;
    l = lp1;
  }
  return l;
}

// Kummer M(a, b, x) by its Taylor series (long double).
inline long double kummer_m_ld(long double a, long double b, long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < 8000; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1.0L));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) && k > 4)
      return sum;
  }
  throw NumericError("kummer_m_ld: series did not converge");
}

// Connection formula, b = 3/2:
//   U(a,3/2,x) = Gamma(-1/2)/Gamma(a-1/2) M(a,3/2,x)
//              + Gamma(1/2)/Gamma(a) x^{-1/2} M(a-1/2,1/2,x)
inline long double kummer_u_connection_ld(long double a, long double x) {
  const long double sqrt_pi = std::sqrt(kPiL);
  long double t1 = -2.0L * sqrt_pi * rgamma_ld(a - 0.5L) *
                   kummer_m_ld(a, 1.5L, x);
  long double t2 = sqrt_pi * rgamma_ld(a) *
                   kummer_m_ld(a - 0.5L, 0.5L, x) / std::sqrt(x);
  return t1 + t2;
}

// Laplace integral U(a,b,x) = 1/Gamma(a) \int_0^inf e^{-xt} t^{a-1}
// (1+t)^{b-a-1} dt, substituted u = x t and evaluated on panels.  Needs
// a >= 2; accurate for x >= ~1.
inline long double kummer_u_integral_ld(long double a, long double x) {
  const long double mu = a - 1.0L;
  const long double s = std::max(2.0L, std::sqrt(mu));
  const long double h0 = (mu > 0.0L) ? mu * std::log(mu) - mu : 0.0L;
  const long double u_end = std::max(64.0L, mu + 16.0L * s + 40.0L);

  auto h = [&](long double u) {
    return (a - 1.0L) * std::log(u) - u + (0.5L - a) * std::log1p(u / x);
  };

  // panel [0,1] with u = v^2 to soften the t^{a-1} endpoint
  long double i0 = integrate_gl(
      [&](long double v) {
        long double u = v * v;
        return 2.0L * v * std::exp(h(u) - h0);
      },
      0.0L, 1.0L, 32);

  std::vector<long double> breaks;
  breaks.push_back(1.0L);
  for (long double g = 2.0L; g < u_end; g *= 2.0L)
    if (g < mu - 12.0L * s || g > mu + 16.0L * s)
      breaks.push_back(g);
  for (int j = -12; j <= 16; ++j) {
    long double p = mu + j * s;
    if (p > 1.0L && p < u_end)
      breaks.push_back(p);
  }
  breaks.push_back(u_end);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  long double isum = i0 + integrate_panels(
                              [&](long double u) { return std::exp(h(u) - h0); },
                              breaks, 40);

  return std::exp(h0 - a * std::log(x) - std::lgamma(a)) * isum;
}

inline long double kummer_u_seed_ld(long double a, long double x) {
  return (x < 1.5L) ? kummer_u_connection_ld(a, x)
                    : kummer_u_integral_ld(a, x);
}

// U(a, 3/2, x) for real a and x > 0.
//  - polynomial case at nonpositive integer a
//  - a >= 2: integral (or connection at small x, where it cancels benignly)
//  - small |a| x: connection formula
//  - otherwise: downward recurrence in a from integral/connection seeds;
//    U is the minimal solution as a -> +inf so this direction is stable.
inline long double kummer_u_ld(long double a, long double x) {
  if (a <= 0.5L && std::abs(a - std::rint(a)) < 1e-12L) {
    int n = static_cast<int>(-std::rint(a));
    int sign = (n % 2 == 0) ? 1 : -1;
    return sign * std::exp(std::lgamma(n + 1.0L)) *
           laguerre_ld(n, 0.5L, x);
  }
  if (x <= 0.0L)
    throw DomainError("kummer_u: x must be > 0 (U(a,3/2,x) diverges at 0)");
  if (a >= 2.0L)
    return kummer_u_seed_ld(a, x);
  if (x <= 20.0L && std::abs(a) * x <= 110.0L && (a <= 0.25L || x <= 2.0L))
    return kummer_u_connection_ld(a, x);

  const int steps = static_cast<int>(std::ceil(2.0L - a));
  const long double a0 = a + steps; // in [2, 3)
  long double up = kummer_u_seed_ld(a0 + 1.0L, x);
  long double cur = kummer_u_seed_ld(a0, x);
  long double ap = a0;
  for (int i = 0; i < steps; ++i) {
    long double next = (x + 2.0L * ap - 1.5L) * cur - ap * (ap - 0.5L) * up;
    up = cur;
    cur = next;
    ap -= 1.0L;
  }
  return cur;
}

} // namespace detail

//! log|Gamma(x)|; x must not be a non-positive integer.
inline double log_gamma(double x) {
  if (detail::is_nonpositive_integer(x, 1e-300))
    throw DomainError("log_gamma: pole at x = " + std::to_string(x));
  int sign = 1;
  return static_cast<double>(detail::log_abs_gamma_ld(x, sign));
}

//! Sign of Gamma(x) (+1 or -1); x must not be a pole.
inline int gamma_sign(double x) {
  if (detail::is_nonpositive_integer(x, 1e-300))
    throw DomainError("gamma_sign: pole at x = " + std::to_string(x));
  if (x > 0.0)
    return 1;
  return (static_cast<std::int64_t>(std::floor(x)) % 2 == 0) ? 1 : -1;
}

//! Gamma(p)/Gamma(q), finite for any non-pole real arguments.
inline double gamma_ratio(double p, double q) {
  if (detail::is_nonpositive_integer(p, 1e-300) ||
      detail::is_nonpositive_integer(q, 1e-300))
    throw DomainError("gamma_ratio: pole argument");
  int sp = 1, sq = 1;
  long double lp = detail::log_abs_gamma_ld(p, sp);
  long double lq = detail::log_abs_gamma_ld(q, sq);
  return sp * sq * static_cast<double>(std::exp(lp - lq));
}

//! Digamma function, valid for negative non-integer x.
inline double digamma(double x) {
  if (detail::is_nonpositive_integer(x, 1e-300))
    throw DomainError("digamma: pole at x = " + std::to_string(x));
  long double xx = x;
  if (xx < 0.5L) {
    // Psi(x) = Psi(1-x) - pi cot(pi x); reduce the argument of tan
    long double r = xx - std::rint(xx);
    return static_cast<double>(digamma(static_cast<double>(1.0L - xx)) -
                               detail::kPiL / std::tan(detail::kPiL * r));
  }
  long double acc = 0.0L;
  while (xx < 10.0L) {
    acc -= 1.0L / xx;
    xx += 1.0L;
  }
  const long double w = 1.0L / (xx * xx);
  long double series =
      w * (1.0L / 12.0L -
           w * (1.0L / 120.0L -
                w * (1.0L / 252.0L -
                     w * (1.0L / 240.0L -
                          w * (1.0L / 132.0L -
                               w * (691.0L / 32760.0L - w / 12.0L))))));
  return static_cast<double>(acc + std::log(xx) - 0.5L / xx - series);
}

//! Generalized Laguerre polynomial L_n^(alpha)(x) by three-term recurrence.
inline double laguerre(int n, double alpha, double x) {
  if (n < 0)
    throw DomainError("laguerre: n must be >= 0");
  if (alpha <= -1.0)
    throw DomainError("laguerre: alpha must be > -1");
  if (x < 0.0)
    throw DomainError("laguerre: x must be >= 0");
  return static_cast<double>(detail::laguerre_ld(n, alpha, x));
}

//! Legendre polynomial P_l(u), u in [-1, 1].
inline double legendre_p(int l, double u) {
  if (l < 0)
    throw DomainError("legendre_p: l must be >= 0");
  if (std::abs(u) > 1.0 + 1e-12)
    throw DomainError("legendre_p: u must lie in [-1, 1]");
  u = std::clamp(u, -1.0, 1.0);
  if (l == 0)
    return 1.0;
  double pm1 = 1.0, p = u;
  for (int k = 1; k < l; ++k) {
    double pp1 = ((2.0 * k + 1.0) * u * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = pp1;
  }
  return p;
}

//! Spherical harmonic Y_l0(theta, 0) = sqrt((2l+1)/4pi) P_l(cos theta).
inline double y_l0(int l, double theta) {
  constexpr double four_pi = 4.0 * 3.14159265358979323846;
  return std::sqrt((2.0 * l + 1.0) / four_pi) *
         legendre_p(l, std::cos(theta));
}

//! Kummer function of the second kind U(a, b, x); only b = 3/2 is supported.
inline double kummer_u(double a, double b, double x) {
  if (b != 1.5)
    throw DomainError("kummer_u: only b = 3/2 is implemented");
  if (x < 0.0)
    throw DomainError("kummer_u: x must be >= 0");
  long double v = detail::kummer_u_ld(a, x);
  if (std::abs(v) > static_cast<long double>(DBL_MAX))
    throw RangeError("kummer_u: result overflows double");
  return static_cast<double>(v);
}

} // namespace trappair
