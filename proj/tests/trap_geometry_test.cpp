#include "trappair/trap_geometry.hpp"

#include <cmath>
#include <gtest/gtest.h>

namespace {

using trappair::from_frequencies;
using trappair::from_frequencies_hz;
using trappair::lambda_of_anisotropy;
using trappair::noninteracting_ground_energy;
using trappair::TrapGeometry;
using trappair::validity_check;

constexpr double kNaMass = 22.98976928 * 1.66053906892e-27; // kg

TEST(TrapGeometry, IsotropicCase) {
  TrapGeometry g = from_frequencies(1.0e6, 1.0e6, kNaMass);
  EXPECT_DOUBLE_EQ(g.A, 1.0);
  EXPECT_DOUBLE_EQ(g.Lambda, 0.0);
  EXPECT_DOUBLE_EQ(g.omega, 1.0e6);
  EXPECT_DOUBLE_EQ(g.d, g.d_perp);
  EXPECT_DOUBLE_EQ(g.d, g.d_z);
}

TEST(TrapGeometry, PaperSodiumTrap) {
  // omega_perp/2pi = 612 kHz, omega_z/2pi = 6.12 kHz -> A = 0.01,
  // omega/2pi close to 500 kHz
  TrapGeometry g = from_frequencies_hz(612.0e3, 6.12e3, kNaMass);
  EXPECT_NEAR(g.A, 0.01, 1e-15);
  EXPECT_NEAR(g.omega / (2.0 * M_PI), 500.0e3, 0.5e3);
  EXPECT_NEAR(g.Lambda, -0.499925, 1e-6);
}

TEST(TrapGeometry, LambdaRangeAndSign) {
  for (double A : {0.01, 0.2, 0.7, 1.0, 3.0, 40.0, 500.0}) {
    double L = lambda_of_anisotropy(A);
    EXPECT_GE(L, -0.5);
    EXPECT_LT(L, 1.0);
    if (A != 1.0) {
      // Lambda(A) and Lambda(1/A) bracket zero
      EXPECT_LT(lambda_of_anisotropy(1.0 / A) * L, 0.0);
    } else {
      EXPECT_DOUBLE_EQ(L, 0.0);
    }
  }
}

TEST(TrapGeometry, LengthScaleIdentities) {
  TrapGeometry g = from_frequencies(2.0e6, 0.37e6, kNaMass);
  EXPECT_NEAR(g.d_perp, g.d * std::sqrt(g.omega / g.omega_perp), 1e-15 * g.d);
  EXPECT_NEAR(g.d_z, g.d * std::sqrt(g.omega / g.omega_z), 1e-15 * g.d);
}

TEST(TrapGeometry, UnitRoundTrip) {
  // physical -> trap units -> physical is the identity to 1e-12 relative
  TrapGeometry g = from_frequencies(2.0e6, 0.37e6, kNaMass);
  const double energy_j = 3.7e-28;
  const double in_trap = energy_j / (trappair::kHbar * g.omega);
  EXPECT_NEAR(in_trap * trappair::kHbar * g.omega, energy_j, 1e-12 * energy_j);
  const double len = 5.0e-9;
  EXPECT_NEAR((len / g.d) * g.d, len, 1e-12 * len);
}

TEST(TrapGeometry, InvalidInputs) {
  EXPECT_THROW(from_frequencies(0.0, 1.0, 1.0), trappair::DomainError);
  EXPECT_THROW(from_frequencies(1.0, -2.0, 1.0), trappair::DomainError);
  EXPECT_THROW(from_frequencies(1.0, 1.0, 0.0), trappair::DomainError);
}

TEST(NoninteractingGroundEnergy, KnownValues) {
  EXPECT_DOUBLE_EQ(noninteracting_ground_energy(1.0), 1.5);
  // large-A limit: (A/2)/sqrt(A^2/3) = sqrt(3)/2
  EXPECT_NEAR(noninteracting_ground_energy(1.0e8), std::sqrt(3.0) / 2.0, 1e-7);
  // always above the sqrt(3)/2 bound-state threshold
  for (double A : {0.01, 0.1, 1.0, 10.0, 100.0})
    EXPECT_GT(noninteracting_ground_energy(A), std::sqrt(3.0) / 2.0);
  EXPECT_NEAR(noninteracting_ground_energy(0.01),
              (1.0 + 0.005) / std::sqrt(2.0 / 3.0 + 1e-4 / 3.0), 1e-14);
}

TEST(ValidityCheck, Thresholds) {
  TrapGeometry g = from_frequencies_hz(612.0e3, 6.12e3, kNaMass);
  EXPECT_TRUE(validity_check(g, 0.0).empty());
  const double min_width = std::min(g.d_perp, g.d_z);
  EXPECT_EQ(validity_check(g, min_width).size(), 1u);
  EXPECT_TRUE(validity_check(g, 0.01 * min_width).empty());
  EXPECT_THROW(validity_check(g, -1.0), trappair::DomainError);
}

} // namespace
