#pragma once

// Renormalized one- and two-dimensional reference models.  The tightly
// confined directions are integrated out into effective couplings g1d/g2d;
// the remaining motion solves a zero-range transcendental equation per
// branch.  Energies are in hbar*omega of the full 3D problem.

#include <cmath>
#include <string>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/root_finding.hpp"
#include "trappair/special_functions.hpp"

namespace trappair {

enum class LowDim { one, two };

struct LowDimLevels {
  LowDim dimension = LowDim::one;
  double A = 0.0;
  double g = 0.0;
  std::vector<double> nu;       // branch roots, ascending energy
  std::vector<double> energies; // hbar*omega
};

//! omega_perp/omega = sqrt(3/2)/sqrt(1 + A^2/2); prefactor of both models.
inline double perp_over_mean(double A) {
  return std::sqrt(1.5) / std::sqrt(1.0 + 0.5 * A * A);
}

//! Effective 1D coupling of hbar*omega g1d delta(z/d).  The denominator
//! renormalizes the bare coupling by the transverse confinement; disabling
//! it (test hook) reproduces the unrenormalized model.
inline double g1d(double a_over_d, double A, bool renormalize = true) {
  if (!(A > 0.0))
    throw DomainError("g1d: A must be > 0");
  const double s = std::pow(1.0 + 0.5 * A * A, -0.25);
  const double c15 = std::pow(1.5, 0.25);
  const double num = c15 / std::sqrt(A) * s * a_over_d;
  if (!renormalize)
    return num;
  const double den = 1.0 - 1.4603 * c15 * s * a_over_d;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(1.4603 * c15 * s * a_over_d)))
    throw ResonanceError("g1d: confinement-induced resonance",
                         1.0 / (1.4603 * c15 * s));
  return num / den;
}

//! Effective 2D coupling with the log-renormalized denominator.
inline double g2d(double a_over_d, double A, bool renormalize = true) {
  if (!(A > 0.0))
    throw DomainError("g2d: A must be > 0");
  const double c = std::pow(1.5 / (M_PI * M_PI), 0.25) * std::sqrt(A) *
                   std::pow(1.0 + 0.5 * A * A, -0.25);
  const double num = c * a_over_d;
  if (!renormalize)
    return num;
  const double logterm = std::log(0.915 * A / (4.0 * M_PI));
  const double den = 1.0 + c * logterm * a_over_d;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(c * logterm * a_over_d)))
    throw ResonanceError("g2d: confinement-induced resonance",
                         -1.0 / (c * logterm));
  return num / den;
}

namespace detail {

// 1D transcendental tan(pi nu) Gamma(nu+1)/Gamma(nu+1/2), in the pole-free
// equivalent -Gamma(1/2-nu)/Gamma(-nu).  Poles at positive half-integers,
// zeros at non-negative integers.
inline double h_1d(double nu) {
  const double n = std::rint(nu);
  const double t = nu - n;
  if (std::abs(t) < 1e-8 && n >= 0.0) {
    // slope at the integer zero: 4^n (n!)^2 sqrt(pi)/(2n)!
    const double slope =
        std::sqrt(M_PI) *
        std::exp(n * std::log(4.0) + 2.0 * std::lgamma(n + 1.0) -
                 std::lgamma(2.0 * n + 1.0));
    return slope * t;
  }
  const double p = 0.5 - nu;
  if (trappair::detail::is_nonpositive_integer(p, 1e-11))
    throw DomainError("h_1d: pole at nu = " + std::to_string(nu));
  return -gamma_ratio(p, -nu);
}

} // namespace detail

//! Root of the 1D transcendental on the given branch: branch 0 spans
//! nu in (-inf, 1/2) (it dives for strong attraction), branch i >= 1 spans
//! (i - 1/2, i + 1/2).
inline double nu_1d(double g, int branch) {
  if (branch < 0)
    throw DomainError("nu_1d: branch must be >= 0");
  if (std::abs(g) > 1e6) {
    // linearized about the tangent pole(s)
    if (g > 0.0) {
      const double k = branch + 0.5;
      return k - gamma_ratio(branch + 1.5, branch + 1.0) / (M_PI * g);
    }
    if (branch >= 1) {
      const double k = branch - 0.5;
      return k + gamma_ratio(branch + 0.5, branch) / (M_PI * (-g));
    }
    return -g * g - 0.25; // branch 0 dives like -g^2
  }
  auto f = [&](double nu) { return detail::h_1d(nu) - g; };
  const double delta = 1e-9 * (branch + 1.0);
  if (branch >= 1)
    return find_root_bracketed(f, branch - 0.5 + delta, branch + 0.5 - delta,
                               1e-14);
  double lo = -2.0;
  while (f(lo) > 0.0)
    lo *= 2.0;
  return find_root_bracketed(f, lo, 0.5 - delta, 1e-14);
}

//! Root of Psi(-nu) = 1/g on the given branch; branch kBound2d = -1 is the
//! always-present 2D bound state (nu < 0), branch i >= 0 spans (i, i + 1).
inline constexpr int kBound2d = -1;

inline double nu_2d(double g, int branch) {
  if (g == 0.0)
    throw DomainError("nu_2d: g = 0 is the non-interacting limit");
  const double target = 1.0 / g;
  auto f = [&](double nu) { return digamma(-nu) - target; };
  if (branch == kBound2d) {
    if (target > 700.0)
      throw RangeError("nu_2d: bound-state root exp(1/g) overflows");
    if (target > 30.0)
      return -(std::exp(target) + 0.5); // Psi(x) = ln x - 1/(2x) + ...
    double lo = -2.0, hi = -1e-9;
    while (f(lo) < 0.0)
      lo *= 2.0;
    // digamma(-nu) ~ -1/(-nu) -> -inf as nu -> 0^-
    while (f(hi) > 0.0)
      hi *= 0.5;
    return find_root_bracketed(f, lo, hi, 1e-14);
  }
  if (branch < 0)
    throw DomainError("nu_2d: invalid branch");
  const double delta = 1e-11 * (branch + 1.0);
  return find_root_bracketed(f, branch + delta, branch + 1.0 - delta, 1e-14);
}

//! Lowest `count` levels of the quasi-1D reference model:
//! E = (omega_perp/omega) [1 + A (2 nu + 1/2)].
inline LowDimLevels energies_1d(double a_over_d, double A, int count,
                                bool renormalize = true) {
  if (count < 1)
    throw DomainError("energies_1d: count must be >= 1");
  LowDimLevels out;
  out.dimension = LowDim::one;
  out.A = A;
  out.g = g1d(a_over_d, A, renormalize);
  const double pref = perp_over_mean(A);
  for (int i = 0; i < count; ++i) {
    const double nu = (out.g == 0.0) ? static_cast<double>(i)
                                     : nu_1d(out.g, i);
    out.nu.push_back(nu);
    out.energies.push_back(pref * (1.0 + A * (2.0 * nu + 0.5)));
  }
  return out;
}

//! Lowest `count` levels of the quasi-2D reference model:
//! E = (omega_perp/omega) [A/2 + 2 nu + 1].  The bound branch leads except
//! in the non-interacting limit.
inline LowDimLevels energies_2d(double a_over_d, double A, int count,
                                bool renormalize = true) {
  if (count < 1)
    throw DomainError("energies_2d: count must be >= 1");
  LowDimLevels out;
  out.dimension = LowDim::two;
  out.A = A;
  out.g = g2d(a_over_d, A, renormalize);
  const double pref = perp_over_mean(A);
  auto push = [&](double nu) {
    out.nu.push_back(nu);
    out.energies.push_back(pref * (0.5 * A + 2.0 * nu + 1.0));
  };
  if (out.g == 0.0) {
    for (int i = 0; i < count; ++i)
      push(static_cast<double>(i));
    return out;
  }
  push(nu_2d(out.g, kBound2d));
  for (int i = 0; i + 1 < count; ++i)
    push(nu_2d(out.g, i));
  return out;
}

} // namespace trappair
