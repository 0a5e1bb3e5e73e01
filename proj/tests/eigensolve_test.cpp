#include "trappair/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <gtest/gtest.h>

namespace {

using trappair::assemble;
using trappair::BasisSpec;
using trappair::bound_state_fit;
using trappair::converge;
using trappair::lambda_of_anisotropy;
using trappair::lowest_k;
using trappair::nu_branch;
using trappair::solve_at;
using trappair::solve_branches;
using trappair::SparseHamiltonian;
using trappair::spectrum_vs_a;
using trappair::TruncationPolicy;

SparseHamiltonian diag_matrix(const std::vector<double>& d) {
  SparseHamiltonian h;
  h.dim = static_cast<int>(d.size());
  for (int i = 0; i < h.dim; ++i) {
    h.rows.push_back(i);
    h.cols.push_back(i);
    h.vals.push_back(d[i]);
  }
  return h;
}

TEST(LowestK, DiagonalMatrix) {
  std::vector<double> d = {4.0, -1.0, 7.0, 0.5, 2.0, -3.0};
  auto r = lowest_k(diag_matrix(d), 3);
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 3; ++i)
    EXPECT_DOUBLE_EQ(r.values[i], sorted[i]);
}

// exact isotropic spectrum: s-wave branch energies plus oscillator levels
std::vector<double> isotropic_oracle(double a, int n_max, int l_max, int k) {
  std::vector<double> levels;
  for (const auto& b : solve_branches(a, n_max))
    levels.push_back(b.energy());
  for (int l = 2; l <= l_max; l += 2)
    for (int n = 0; n <= n_max; ++n)
      levels.push_back(2.0 * n + l + 1.5);
  std::sort(levels.begin(), levels.end());
  levels.resize(k);
  return levels;
}

TEST(LowestK, IsotropicMatchesBuschRoots) {
  for (double a : {-10.0, -1.0, 0.0, 0.5, 10.0}) {
    BasisSpec spec(6, 6, a, 0.0);
    auto r = lowest_k(assemble(spec), 6, 1e-10);
    auto want = isotropic_oracle(a, 6, 6, 6);
    for (int i = 0; i < 6; ++i)
      EXPECT_NEAR(r.values[i], want[i], 1e-9) << "a=" << a << " i=" << i;
  }
}

SparseHamiltonian random_sparse(int n, unsigned seed, double diag_spread) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SparseHamiltonian h;
  h.dim = n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j) {
        h.rows.push_back(i);
        h.cols.push_back(j);
        h.vals.push_back(diag_spread * i + u(rng));
      } else if ((i + 2 * j) % 5 == 0) {
        h.rows.push_back(i);
        h.cols.push_back(j);
        h.vals.push_back(u(rng));
      }
    }
  return h;
}

TEST(LowestK, RandomSparseAgainstDenseOracle) {
  for (unsigned seed : {42u, 7u}) {
    auto h = random_sparse(50, seed, 0.5);
    auto dense = lowest_k(h, 5, 1e-10, 800, /*dense_threshold=*/64);
    auto davidson = lowest_k(h, 5, 1e-10, 2000, /*dense_threshold=*/8);
    for (int i = 0; i < 5; ++i)
      EXPECT_NEAR(davidson.values[i], dense.values[i], 1e-8)
          << "seed=" << seed << " i=" << i;
    // residual contract
    std::vector<double> y(50);
    for (int i = 0; i < 5; ++i) {
      h.apply(davidson.vectors[i].data(), y.data());
      double r2 = 0.0;
      for (int c = 0; c < 50; ++c) {
        double ri = y[c] - davidson.values[i] * davidson.vectors[i][c];
        r2 += ri * ri;
      }
      EXPECT_LT(std::sqrt(r2), 1e-9);
    }
  }
}

TEST(LowestK, DavidsonMatchesDenseOnRealProblem) {
  // anisotropic, forced through the iterative path
  BasisSpec spec(24, 24, -2.0, lambda_of_anisotropy(0.3));
  auto h = assemble(spec);
  auto dense = lowest_k(h, 6, 1e-10, 800, h.dim + 1);
  auto david = lowest_k(h, 6, 1e-9, 800, 8);
  for (int i = 0; i < 6; ++i)
    EXPECT_NEAR(david.values[i], dense.values[i], 5e-9) << "i=" << i;
}

TEST(LowestK, VectorSignConvention) {
  BasisSpec spec(10, 8, -1.0, lambda_of_anisotropy(0.5));
  auto r = lowest_k(assemble(spec), 3);
  for (const auto& v : r.vectors) {
    double best = 0.0;
    for (double x : v)
      best = std::max(best, std::abs(x));
    bool found = false;
    for (double x : v)
      if (std::abs(std::abs(x) - best) < 1e-300) {
        EXPECT_GT(x, 0.0);
        found = true;
        break;
      }
    EXPECT_TRUE(found);
  }
}

TEST(LowestK, ArgumentChecks) {
  std::vector<double> d = {1.0, 2.0};
  EXPECT_THROW(lowest_k(diag_matrix(d), 0), trappair::DomainError);
  EXPECT_THROW(lowest_k(diag_matrix(d), 3), trappair::DomainError);
}

TEST(Eigensolve, VariationalMonotonicity) {
  const double A = 0.3, a = -2.0;
  std::vector<double> prev;
  for (int size : {8, 16, 24}) {
    auto s = solve_at(A, a, 4, size, size);
    if (!prev.empty())
      for (int i = 0; i < 4; ++i)
        EXPECT_LE(s.eig.values[i], prev[i] + 1e-9) << "size=" << size;
    prev = s.eig.values;
  }
}

TEST(Eigensolve, ContinuityTowardIsotropic) {
  auto iso = solve_at(1.0, -1.5, 4, 16, 16);
  for (double eps : {1e-3, -1e-3}) {
    auto near = solve_at(1.0 + eps, -1.5, 4, 16, 16);
    for (int i = 0; i < 4; ++i)
      EXPECT_NEAR(near.eig.values[i], iso.eig.values[i], 0.02) << "i=" << i;
  }
}

TEST(Converge, IsotropicConvergesImmediately) {
  auto s = converge(1.0, -1.0, 4, 1e-4, 8, 8);
  EXPECT_LE(s.spec.n_max, 32);
  EXPECT_LE(s.spec.l_max, 32);
  EXPECT_LT(s.achieved_tol, 1e-4);
}

TEST(Converge, ModerateAnisotropy) {
  auto s = converge(0.5, -2.0, 4, 1e-5, 8, 8);
  EXPECT_LT(s.achieved_tol, 1e-5);
  // doubling once more must not move levels beyond the reported tolerance
  auto bigger = solve_at(0.5, -2.0, 4, 2 * s.spec.n_max, s.spec.l_max);
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(bigger.eig.values[i], s.eig.values[i], 1e-5);
}

TEST(Converge, CapsRaiseResourceError) {
  EXPECT_THROW(converge(0.02, -20.0, 4, 1e-6, 8, 8, 16, 16),
               trappair::ResourceError);
}

TEST(SpectrumVsA, SinglePointEqualsLowestK) {
  auto t = spectrum_vs_a(0.5, {-2.0}, 4, TruncationPolicy::fixed(16, 16));
  auto direct = solve_at(0.5, -2.0, 4, 16, 16);
  ASSERT_EQ(t.parameters.size(), 1u);
  for (int i = 0; i < 4; ++i)
    EXPECT_DOUBLE_EQ(t.energies[0][i], direct.eig.values[i]);
}

TEST(SpectrumVsA, ThreadCountDoesNotChangeResults) {
  std::vector<double> grid = {-3.0, -1.0, 0.5, 2.0};
  auto t1 = spectrum_vs_a(0.5, grid, 3, TruncationPolicy::fixed(12, 12),
                          false, 1);
  auto t4 = spectrum_vs_a(0.5, grid, 3, TruncationPolicy::fixed(12, 12),
                          false, 4);
  for (std::size_t p = 0; p < grid.size(); ++p)
    for (int i = 0; i < 3; ++i)
      EXPECT_EQ(t1.energies[p][i], t4.energies[p][i]);
}

TEST(SpectrumVsA, LargePositiveAndNegativeAgree) {
  // |a| -> inf: both signs approach the same spectrum; residual gap is
  // O(d/a) ~ 0.01 at |a| = 100
  auto tm = spectrum_vs_a(0.1, {-100.0}, 4,
                          TruncationPolicy::automatic(1e-4, 32, 32, 256, 256));
  auto tp = spectrum_vs_a(0.1, {100.0}, 5,
                          TruncationPolicy::automatic(1e-4, 32, 32, 256, 256));
  // on the positive side the extra state is the near-degenerate dimer;
  // match level i of a<0 with level i+... the bound state at E ~ 0.5
  // pairs with the lowest a<0 level
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(tp.energies[0][i], tm.energies[0][i], 0.03) << "i=" << i;
  EXPECT_THROW(spectrum_vs_a(0.5, {}, 2, TruncationPolicy::fixed(8, 8)),
               trappair::DomainError);
}

TEST(BoundStateFit, DegenerateGridThrows) {
  EXPECT_THROW(
      bound_state_fit(-100.0, {1.0, 1.0}, TruncationPolicy::fixed(16, 16)),
      trappair::DomainError);
}

TEST(BoundStateFit, RecoversSyntheticQuadratic) {
  // with a tiny |Lambda| range the fit must reproduce the solver's own
  // lowest level at Lambda = 0 (c0 term)
  auto fit = bound_state_fit(-50.0, {0.8, 0.9, 1.0, 1.1, 1.25},
                             TruncationPolicy::fixed(24, 24), 2);
  auto iso = solve_at(1.0, -50.0, 1, 24, 24);
  EXPECT_NEAR(fit.c0, iso.eig.values[0], 2e-3);
  EXPECT_LT(fit.max_fit_residual, 2e-3);
}

} // namespace
