#pragma once

// Axisymmetric trap geometry and the derived dimensionless scales.  All
// downstream modules work in trap units (energies in hbar*omega, lengths in
// d); physical units appear only here, at the I/O boundary.

#include <cmath>
#include <string>
#include <vector>

#include "trappair/errors.hpp"

namespace trappair {

inline constexpr double kHbar = 1.054571817e-34; // J s

struct TrapGeometry {
  double omega_perp = 0.0;  // rad/s
  double omega_z = 0.0;     // rad/s
  double reduced_mass = 0.0; // kg
  double A = 0.0;           // omega_z / omega_perp
  double omega = 0.0;       // sqrt((2 w_perp^2 + w_z^2)/3), rad/s
  double Lambda = 0.0;      // (A^2 - 1)/(A^2 + 2)
  double d = 0.0;           // sqrt(hbar/(mu omega)), m
  double d_perp = 0.0;
  double d_z = 0.0;
};

//! Anisotropy parameter Lambda = (A^2 - 1)/(A^2 + 2).
inline double lambda_of_anisotropy(double A) {
  if (!(A > 0.0))
    throw DomainError("lambda_of_anisotropy: A must be > 0");
  return (A * A - 1.0) / (A * A + 2.0);
}

//! Mean frequency over the transverse one: omega/omega_perp = sqrt((2+A^2)/3).
inline double omega_over_omega_perp(double A) {
  return std::sqrt((2.0 + A * A) / 3.0);
}

//! Build the geometry from angular frequencies and the single-atom mass.
inline TrapGeometry from_frequencies(double omega_perp, double omega_z,
                                     double atom_mass) {
  if (!(omega_perp > 0.0))
    throw DomainError("from_frequencies: omega_perp must be > 0");
  if (!(omega_z > 0.0))
    throw DomainError("from_frequencies: omega_z must be > 0");
  if (!(atom_mass > 0.0))
    throw DomainError("from_frequencies: atom_mass must be > 0");
  TrapGeometry g;
  g.omega_perp = omega_perp;
  g.omega_z = omega_z;
  g.reduced_mass = atom_mass / 2.0;
  g.A = omega_z / omega_perp;
  g.omega = std::sqrt((2.0 * omega_perp * omega_perp + omega_z * omega_z) / 3.0);
  g.Lambda = lambda_of_anisotropy(g.A);
  g.d = std::sqrt(kHbar / (g.reduced_mass * g.omega));
  g.d_perp = std::sqrt(kHbar / (g.reduced_mass * omega_perp));
  g.d_z = std::sqrt(kHbar / (g.reduced_mass * omega_z));
  return g;
}

//! Convenience overload taking plain frequencies nu = omega/2pi in Hz.
inline TrapGeometry from_frequencies_hz(double nu_perp_hz, double nu_z_hz,
                                        double atom_mass) {
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  return from_frequencies(two_pi * nu_perp_hz, two_pi * nu_z_hz, atom_mass);
}

//! Ground energy of the relative motion without the pseudopotential, in
//! hbar*omega: (1 + A/2)/sqrt(2/3 + A^2/3).  A state below this threshold
//! counts as trap-bound.
inline double noninteracting_ground_energy(double A) {
  if (!(A > 0.0))
    throw DomainError("noninteracting_ground_energy: A must be > 0");
  return (1.0 + A / 2.0) / std::sqrt(2.0 / 3.0 + A * A / 3.0);
}

//! Pseudopotential validity check: warns when the van der Waals length is
//! not small against the tightest oscillator width.  Threshold 0.1 * min
//! width; a zero length means "unknown" and produces no warning.
inline std::vector<std::string> validity_check(const TrapGeometry& g,
                                               double van_der_waals_length) {
  if (van_der_waals_length < 0.0)
    throw DomainError("validity_check: van der Waals length must be >= 0");
  std::vector<std::string> warnings;
  if (van_der_waals_length == 0.0)
    return warnings;
  const double min_width = std::min(g.d_perp, g.d_z);
  if (van_der_waals_length >= 0.1 * min_width)
    warnings.push_back(
        "van der Waals length " + std::to_string(van_der_waals_length) +
        " m is not small against the tightest trap width " +
        std::to_string(min_width) +
        " m; the pseudopotential approximation may fail");
  return warnings;
}

} // namespace trappair
