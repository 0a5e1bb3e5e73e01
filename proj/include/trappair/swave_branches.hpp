#pragma once

// Isotropic-trap s-wave solutions with the regularized contact interaction:
// the transcendental branch roots nu_n(a/d), their derivatives, and the
// basis functions Q_n (interacting s-wave) and R_nl (regular oscillator).
// Everything is in trap units: lengths in d, energies in hbar*omega.

#include <cmath>
#include <string>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/root_finding.hpp"
#include "trappair/special_functions.hpp"

namespace trappair {

inline constexpr int kBoundBranch = -1;

struct SWaveBranch {
  int branch_index = 0; // 0,1,2,... or kBoundBranch
  double a_over_d = 0.0;
  double nu = 0.0;
  double dnu_da = 0.0; // d(nu)/d(a/d) > 0
  bool is_bound() const { return branch_index == kBoundBranch; }
  double energy() const { return 2.0 * nu + 1.5; } // hbar*omega
};

//! a/d as a function of nu: (1/2) tan(pi nu) Gamma(nu+1)/Gamma(nu+3/2),
//! evaluated through the pole-free equivalent Gamma(-nu-1/2)/(2 Gamma(-nu)).
//! Poles sit at nu = -1/2 and the positive half-integers.
inline double intercept(double nu) {
  const double n = std::rint(nu);
  const double t = nu - n;
  if (std::abs(t) < 1e-8 && n >= 0.0) {
    // a(n + t) = (pi/2) n!/Gamma(n+3/2) t (1 - t (Psi(n+1) + Psi(-n-1/2)))
    const double coeff = 0.5 * M_PI * gamma_ratio(n + 1.0, n + 1.5);
    return coeff * t * (1.0 - t * (digamma(n + 1.0) + digamma(-n - 0.5)));
  }
  const double p = -nu - 0.5;
  if (detail::is_nonpositive_integer(p, 1e-11))
    throw DomainError("intercept: pole at nu = " + std::to_string(nu));
  return 0.5 * gamma_ratio(p, -nu);
}

//! d/a as a function of nu: 2 Gamma(-nu)/Gamma(-nu-1/2).  Smooth through
//! |a| -> infinity; poles at non-negative integer nu.
inline double inverse_intercept(double nu) {
  const double q = -nu;
  if (detail::is_nonpositive_integer(q, 1e-11))
    throw DomainError("inverse_intercept: pole at nu = " + std::to_string(nu));
  const double khalf = std::rint(nu - 0.5); // nu near khalf + 1/2
  const double s = nu - (khalf + 0.5);
  if (std::abs(s) < 1e-8 && khalf >= -1.0) {
    // zero crossing at half-integer nu:
    // u(nu) = -2 pi (k+1)!/Gamma(k+3/2) s (1 - s (Psi(k+2) + Psi(-k-1/2)))
    const double coeff = -2.0 * M_PI * gamma_ratio(khalf + 2.0, khalf + 1.5);
    return coeff * s *
           (1.0 - s * (digamma(khalf + 2.0) + digamma(-khalf - 0.5)));
  }
  return 2.0 * gamma_ratio(q, q - 0.5);
}

namespace detail {

// dnu/d(a/d) at the branch root; a = intercept(nu).
inline double branch_slope(double nu, double a_over_d) {
  const double frac = std::abs(nu - std::rint(nu));
  if (frac < 1e-7) {
    // a -> 0 limit: d(a)/d(nu) = (pi/2) Gamma(n+1)/Gamma(n+3/2)
    const double n = std::rint(nu);
    return (2.0 / M_PI) * gamma_ratio(n + 1.5, n + 1.0);
  }
  const double da_dnu =
      a_over_d * (digamma(-nu) - digamma(-nu - 0.5));
  if (!(da_dnu > 0.0))
    throw NumericError("branch_slope: non-positive da/dnu", da_dnu);
  return 1.0 / da_dnu;
}

} // namespace detail

//! Solve the s-wave quantization condition for the requested branch.
//! Scattering branch n: nu in (n - 1/2, n] for a <= 0, [n, n + 1/2) for
//! a >= 0.  Bound branch (a > 0 only): nu < -1/2.
inline SWaveBranch nu_branch(double a_over_d, int branch) {
  SWaveBranch out;
  out.branch_index = branch;
  out.a_over_d = a_over_d;

  if (branch == kBoundBranch) {
    if (!(a_over_d > 0.0))
      throw DomainError("nu_branch: bound branch requires a/d > 0");
    const double u = 1.0 / a_over_d;
    if (a_over_d > 1e10) {
      // at the pole: linearized inverse_intercept about nu = -1/2
      out.nu = -0.5 - u / (2.0 * std::sqrt(M_PI));
      out.dnu_da = detail::branch_slope(out.nu, a_over_d);
      return out;
    }
    auto f = [&](double nu) { return inverse_intercept(nu) - u; };
    // inverse_intercept decreases from +inf to 0 on (-inf, -1/2)
    double hi = -0.5 - 1e-12;
    double lo = std::min(-0.75 - 0.25 * u * u - 1.0, -2.0);
    while (f(lo) < 0.0)
      lo = 2.0 * lo;
    out.nu = find_root_bracketed(f, lo, hi, 1e-15);
    out.dnu_da = detail::branch_slope(out.nu, a_over_d);
    return out;
  }

  if (branch < 0)
    throw DomainError("nu_branch: invalid branch index");
  if (a_over_d == 0.0) {
    out.nu = static_cast<double>(branch);
    out.dnu_da = detail::branch_slope(out.nu, 0.0);
    return out;
  }

  const double n = static_cast<double>(branch);
  if (std::abs(a_over_d) <= 1.0) {
    // root sits between the integer (a = 0) and the tangent pole; the
    // integer endpoint itself is regular, the pole side needs clearance
    const double delta = 1e-9 * (n + 1.0);
    auto f = [&](double nu) { return intercept(nu) - a_over_d; };
    if (a_over_d < 0.0)
      out.nu = find_root_bracketed(f, n - 0.5 + delta, n, 1e-15);
    else
      out.nu = find_root_bracketed(f, n, n + 0.5 - delta, 1e-15);
  } else if (std::abs(a_over_d) > 1e10) {
    // essentially at the pole: invert the linearized inverse_intercept
    const double half = (a_over_d < 0.0) ? n - 0.5 : n + 0.5;
    const double k = half - 0.5;
    const double coeff = -2.0 * M_PI * gamma_ratio(k + 2.0, k + 1.5);
    out.nu = half + (1.0 / a_over_d) / coeff;
  } else {
    // solve in u = d/a, regular at the tangent pole endpoint
    const double u = 1.0 / a_over_d;
    const double delta = 1e-9 * (n + 1.0);
    auto f = [&](double nu) { return inverse_intercept(nu) - u; };
    if (a_over_d < 0.0)
      out.nu = find_root_bracketed(f, n - 0.5 + 1e-13, n - delta, 1e-15);
    else
      out.nu = find_root_bracketed(f, n + delta, n + 0.5 - 1e-13, 1e-15);
  }

  // residual check in the form that stays finite at the solution
  const double resid = (std::abs(a_over_d) <= 1.0)
                           ? std::abs(intercept(out.nu) - a_over_d)
                           : std::abs(inverse_intercept(out.nu) - 1.0 / a_over_d);
  if (resid > 1e-10)
    throw NumericError("nu_branch: residual too large", resid);

  out.dnu_da = detail::branch_slope(out.nu, a_over_d);
  return out;
}

//! All branches needed for a basis with s-wave indices 0..n_max; the bound
//! branch is prepended when a/d > 0.
inline std::vector<SWaveBranch> solve_branches(double a_over_d, int n_max) {
  std::vector<SWaveBranch> out;
  out.reserve(n_max + 2);
  if (a_over_d > 0.0)
    out.push_back(nu_branch(a_over_d, kBoundBranch));
  for (int n = 0; n <= n_max; ++n)
    out.push_back(nu_branch(a_over_d, n));
  return out;
}

//! Normalized radial oscillator function R_nl(r), r in units of d, value in
//! units d^{-3/2}.  Uses a coefficient-normalized recurrence in n so that
//! intermediates stay bounded for large n, l.
inline double eval_R(int n, int l, double r_over_d) {
  if (n < 0 || l < 0)
    throw DomainError("eval_R: n, l must be >= 0");
  if (r_over_d < 0.0)
    throw DomainError("eval_R: r must be >= 0");
  const double alpha = l + 0.5;
  const double x = r_over_d * r_over_d;
  // seed R_0 = sqrt(2/Gamma(l+3/2)) r^l e^{-x/2}, built in log space
  double log_seed = 0.5 * (std::log(2.0) - std::lgamma(l + 1.5)) - 0.5 * x;
  if (l > 0) {
    if (r_over_d == 0.0)
      return 0.0;
    log_seed += l * std::log(r_over_d);
  }
  if (log_seed < -740.0)
    return 0.0;
  double rm1 = 0.0;
  double rm = std::exp(log_seed);
  for (int m = 1; m <= n; ++m) {
    const double denom = std::sqrt(m * (m + alpha));
    const double c1 = (2.0 * m - 1.0 + alpha - x) / denom;
    const double c2 = std::sqrt((m - 1.0) * (m - 1.0 + alpha)) / denom;
    const double next = c1 * rm - c2 * rm1;
    rm1 = rm;
    rm = next;
  }
  return rm;
}

//! Interacting s-wave basis function Q_n(r) for a solved branch, r in d,
//! value in d^{-3/2}.  Sign convention: Q_n -> +R_{n0} continuously as
//! a -> 0 on scattering branches; the bound-branch function is positive.
inline double eval_Q(const SWaveBranch& b, double r_over_d) {
  if (!(r_over_d > 0.0))
    throw DomainError("eval_Q: r must be > 0 (use eval_rQ at the origin)");
  if (b.dnu_da <= 0.0)
    throw StateError("eval_Q: branch not solved");
  const double nu = b.nu;
  if (!b.is_bound() && std::abs(nu - std::rint(nu)) < 1e-6)
    return eval_R(b.branch_index, 0, r_over_d); // a -> 0 limiting form
  const long double x = static_cast<long double>(r_over_d) * r_over_d;
  int sg = 1;
  const long double lg = detail::log_abs_gamma_ld(-static_cast<long double>(nu), sg);
  const long double u = detail::kummer_u_ld(-nu, x);
  const long double core = sg * std::exp(lg - 0.5L * x) * u;
  const double sigma = b.is_bound() ? 1.0 : -1.0;
  const double prefactor =
      sigma * 2.0 * b.a_over_d * std::sqrt(b.dnu_da) / std::sqrt(M_PI);
  return prefactor * static_cast<double>(core);
}

//! r * Q_n(r), finite at the origin: r Q_n -> sigma * 2 (a/d) sqrt(dnu/da).
inline double eval_rQ(const SWaveBranch& b, double r_over_d) {
  if (r_over_d < 0.0)
    throw DomainError("eval_rQ: r must be >= 0");
  if (b.dnu_da <= 0.0)
    throw StateError("eval_rQ: branch not solved");
  if (r_over_d == 0.0) {
    if (!b.is_bound() && std::abs(b.nu - std::rint(b.nu)) < 1e-6)
      return 0.0; // regular limit R_{n0}(0) * r -> 0
    const double sigma = b.is_bound() ? 1.0 : -1.0;
    return sigma * 2.0 * b.a_over_d * std::sqrt(b.dnu_da);
  }
  return r_over_d * eval_Q(b, r_over_d);
}

} // namespace trappair
