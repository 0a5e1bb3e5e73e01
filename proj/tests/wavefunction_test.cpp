#include "trappair/wavefunction.hpp"

#include <cmath>
#include <sstream>
#include <gtest/gtest.h>

#include "trappair/eigensolve.hpp"

namespace {

using trappair::BasisSpec;
using trappair::export_grid;
using trappair::grid_norm;
using trappair::grid_second_moments;
using trappair::solve_at;
using trappair::solve_branches;
using trappair::Wavefunction;
using trappair::write_grid_csv;

Wavefunction make_state(double A, double a, int level, int n_max, int l_max) {
  auto s = solve_at(A, a, level + 1, n_max, l_max);
  return Wavefunction(s.spec, solve_branches(a, n_max),
                      s.eig.vectors[level]);
}

TEST(Wavefunction, NoninteractingIsotropicGround) {
  // a = 0, Lambda = 0: r psi = r R_00(r) Y_00
  auto s = solve_at(1.0, 0.0, 1, 4, 4);
  Wavefunction wf(s.spec, solve_branches(0.0, 4), s.eig.vectors[0]);
  for (double r : {0.0, 0.3, 1.0, 2.2})
    for (double th : {0.0, 1.1, 2.9}) {
      const double want = r * trappair::eval_R(0, 0, r) /
                          std::sqrt(4.0 * M_PI);
      EXPECT_NEAR(std::abs(wf.rpsi(r, th)), std::abs(want), 1e-12)
          << "r=" << r;
    }
}

TEST(Wavefunction, ParityInTheta) {
  auto wf = make_state(0.5, -2.0, 1, 12, 12);
  for (double r : {0.2, 1.0, 3.4})
    for (double th : {0.2, 0.9, 1.4}) {
      const double v = wf.rpsi(r, th);
      EXPECT_NEAR(wf.rpsi(r, M_PI - th), v, 1e-12 * (1.0 + std::abs(v)));
    }
}

TEST(Wavefunction, FiniteAtOrigin) {
  auto wf = make_state(0.5, -2.0, 0, 12, 12);
  const double v0 = wf.rpsi(0.0, 0.0);
  EXPECT_TRUE(std::isfinite(v0));
  EXPECT_NE(v0, 0.0); // interacting s-wave: r psi has a contact value
  EXPECT_NEAR(wf.rpsi(1e-7, 0.4), v0, 1e-5 * std::abs(v0) + 1e-8);
}

TEST(Wavefunction, MismatchedBranchesThrow) {
  auto s = solve_at(0.5, -2.0, 1, 8, 8);
  EXPECT_THROW(
      Wavefunction(s.spec, solve_branches(-1.0, 8), s.eig.vectors[0]),
      trappair::StateError);
  std::vector<double> junk(s.spec.dimension(), 0.0);
  junk[0] = 0.5; // not unit norm
  EXPECT_THROW(Wavefunction(s.spec, solve_branches(-2.0, 8), junk),
               trappair::DomainError);
}

TEST(ExportGrid, NormReconstruction) {
  auto wf = make_state(0.5, -2.0, 0, 16, 16);
  auto g = export_grid(wf, 7.0, 7.0, 161);
  EXPECT_NEAR(grid_norm(g), 1.0, 1e-3);
}

TEST(ExportGrid, GaussianEnvelope) {
  // q = |r psi| e^{r^2/4} must not grow outward where the amplitude is
  // numerically meaningful; below the floor, the truncated expansion's far
  // tail (an L^2-small artifact) would be amplified by e^{r^2/4}
  auto wf = make_state(0.8, -2.0, 1, 32, 32);
  auto g = export_grid(wf, 6.0, 6.0, 61);
  const double floor_amp = 1e-6;
  double q_in = 0.0, q_out = 0.0;
  const int n = static_cast<int>(g.x.size());
  for (int iz = 0; iz < n; ++iz)
    for (int ix = 0; ix < n; ++ix) {
      const double v = std::abs(g.at(ix, iz));
      if (v < floor_amp)
        continue;
      const double r2 = g.x[ix] * g.x[ix] + g.z[iz] * g.z[iz];
      const double q = v * std::exp(r2 / 4.0);
      (r2 <= 25.0 ? q_in : q_out) = std::max(r2 <= 25.0 ? q_in : q_out, q);
    }
  EXPECT_GT(q_in, 0.0);
  EXPECT_LE(q_out, q_in * 1.0001);
}

TEST(ExportGrid, SymmetriesAndDeterminism) {
  auto wf = make_state(0.4, 1.5, 0, 10, 10);
  auto g = export_grid(wf, 5.0, 5.0, 41);
  const int n = 41;
  for (int iz = 0; iz < n; ++iz)
    for (int ix = 0; ix < n; ++ix) {
      EXPECT_DOUBLE_EQ(g.at(ix, iz), g.at(n - 1 - ix, iz));
      EXPECT_DOUBLE_EQ(g.at(ix, iz), g.at(ix, n - 1 - iz));
    }
  std::ostringstream s1, s2;
  write_grid_csv(g, s1);
  write_grid_csv(export_grid(wf, 5.0, 5.0, 41), s2);
  EXPECT_EQ(s1.str(), s2.str());
  EXPECT_EQ(s1.str().substr(0, 12), "x,z,r_psi\n-5");
  std::ostringstream m;
  write_grid_csv(g, m, /*gnuplot_matrix=*/true);
  EXPECT_EQ(m.str().substr(0, 4), "z\\x,");
}

TEST(ExportGrid, ArgumentChecks) {
  auto wf = make_state(0.5, -2.0, 0, 8, 8);
  EXPECT_THROW(export_grid(wf, -1.0, 5.0, 41), trappair::DomainError);
  EXPECT_THROW(export_grid(wf, 5.0, 5.0, 40), trappair::DomainError);
}

TEST(GridMoments, ElongationFollowsAnisotropy) {
  // cigar trap (A < 1): the excited trap level is z-elongated,
  // <z^2>/<x^2> well above 1
  auto wf = make_state(0.2, -5.0, 1, 32, 32);
  auto g = export_grid(wf, 6.0, 14.0, 121);
  auto [zz, xx] = grid_second_moments(g);
  EXPECT_GT(zz / xx, 3.0);
}

} // namespace
