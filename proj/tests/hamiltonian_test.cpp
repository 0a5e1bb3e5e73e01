#include "trappair/hamiltonian.hpp"

#include <cmath>
#include <map>
#include <gtest/gtest.h>

#include "test_support.hpp"
#include "trappair/special_functions.hpp"
#include "trappair/trap_geometry.hpp"

namespace {

using trappair::angular_I;
using trappair::assemble;
using trappair::BasisSpec;
using trappair::eval_Q;
using trappair::eval_R;
using trappair::kBoundBranch;
using trappair::lambda_of_anisotropy;
using trappair::nu_branch;
using trappair::radial_r2;
using trappair::solve_branches;
using trappair::swave_coupling;
using trappair::SWaveBranch;
using trappair::y_l0;

// angular oracle: sqrt(4pi/5) * 2pi * int y_l'0 y_20 y_l0 d(cos theta)
double angular_oracle(int l, int lp) {
  auto y = [](int ll, double u) {
    return std::sqrt((2.0 * ll + 1.0) / (4.0 * M_PI)) *
           trappair::legendre_p(ll, u);
  };
  double integral = test_support::cos_theta_integral(
      [&](double u) { return y(lp, u) * y(2, u) * y(l, u); });
  return std::sqrt(4.0 * M_PI / 5.0) * 2.0 * M_PI * integral;
}

TEST(AngularI, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(angular_I(0, 0), 0.0);
  // <2 2 0 0|2 0>^2 = 2/7 (the defining integral, see quadrature oracle)
  EXPECT_NEAR(angular_I(2, 2), 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(angular_I(0, 2), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_DOUBLE_EQ(angular_I(0, 4), 0.0);
  EXPECT_DOUBLE_EQ(angular_I(2, 8), 0.0);
  EXPECT_THROW(angular_I(1, 2), trappair::DomainError);
}

TEST(AngularI, QuadratureOracle) {
  for (int l = 0; l <= 8; l += 2)
    for (int lp = 0; lp <= 8; lp += 2) {
      EXPECT_NEAR(angular_I(l, lp), angular_oracle(l, lp), 1e-12)
          << "l=" << l << " lp=" << lp;
      EXPECT_DOUBLE_EQ(angular_I(l, lp), angular_I(lp, l));
    }
}

TEST(RadialR2, SpecValues) {
  EXPECT_NEAR(radial_r2(0, 2, 0, 2), 3.5, 1e-15);
  EXPECT_NEAR(radial_r2(1, 2, 0, 2), -0.5 * std::sqrt(14.0), 1e-15);
  EXPECT_NEAR(radial_r2(0, 2, 0, 4), 0.5 * std::sqrt(63.0), 1e-15);
  EXPECT_THROW(radial_r2(0, 0, 0, 2), trappair::DomainError);
}

TEST(RadialR2, QuadratureOracle) {
  for (int l : {2, 4, 6})
    for (int lp : {2, 4, 6}) {
      if (std::abs(l - lp) > 2)
        continue;
      for (int n = 0; n <= 8; ++n)
        for (int np = 0; np <= 8; ++np) {
          double want = test_support::radial_integral([&](double r) {
            return eval_R(n, l, r) * eval_R(np, lp, r) * r * r * r * r;
          });
          EXPECT_NEAR(radial_r2(n, l, np, lp), want, 1e-8)
              << "n=" << n << " l=" << l << " np=" << np << " lp=" << lp;
        }
    }
}

double swave_quadrature(const SWaveBranch& b, int np) {
  return test_support::radial_integral([&](double r) {
    return trappair::eval_rQ(b, r) * eval_R(np, 2, r) * r * r * r;
  });
}

TEST(SwaveCoupling, QuadratureOracle) {
  for (double a : {-5.0, -0.5, 0.5, 5.0}) {
    auto branches = solve_branches(a, 4);
    for (const SWaveBranch& b : branches)
      for (int np = 0; np <= 6; ++np)
        EXPECT_NEAR(swave_coupling(b, np), swave_quadrature(b, np), 1e-8)
            << "a=" << a << " branch=" << b.branch_index << " np=" << np;
  }
}

TEST(SwaveCoupling, SpotCheckStrongCoupling) {
  SWaveBranch b = nu_branch(-25.0, 0);
  EXPECT_NEAR(swave_coupling(b, 0), swave_quadrature(b, 0), 1e-8);
}

TEST(SwaveCoupling, SmallALimitMatchesRegularPattern) {
  // exact regular pattern at |nu - n| < 1e-6, O(a) near it
  for (int n : {0, 1, 3}) {
    SWaveBranch tiny = nu_branch(1e-7, n);
    SWaveBranch small_neg = nu_branch(-1e-4, n);
    for (int np = 0; np <= n + 2; ++np) {
      double regular = 0.0;
      if (np == n)
        regular = 0.5 * std::sqrt((2.0 * n + 3.0) * (2.0 * n + 5.0));
      else if (np == n - 1)
        regular = -std::sqrt(2.0 * n * (2.0 * n + 3.0));
      else if (np == n - 2)
        regular = std::sqrt((n - 1.0) * n);
      EXPECT_DOUBLE_EQ(swave_coupling(tiny, np), regular)
          << "n=" << n << " np=" << np;
      EXPECT_NEAR(swave_coupling(small_neg, np), regular, 0.05)
          << "n=" << n << " np=" << np;
    }
  }
}

TEST(SwaveCoupling, RowTailDecays) {
  SWaveBranch b = nu_branch(-2.0, 0);
  double prev = std::abs(swave_coupling(b, 5));
  double tail_sum = 0.0;
  for (int np = 6; np <= 60; ++np) {
    double cur = std::abs(swave_coupling(b, np));
    EXPECT_LT(cur, prev) << "np=" << np;
    tail_sum += cur;
    prev = cur;
  }
  EXPECT_LT(std::abs(swave_coupling(b, 60)), 2e-3);
  EXPECT_LT(tail_sum, 1.5); // absolutely summable row
}

TEST(Assemble, IsotropicIsDiagonal) {
  BasisSpec spec(5, 6, -1.3, 0.0);
  auto h = assemble(spec);
  EXPECT_EQ(h.dim, spec.dimension());
  EXPECT_EQ(h.stored_entries(), static_cast<std::size_t>(h.dim));
  for (std::size_t k = 0; k < h.vals.size(); ++k)
    EXPECT_EQ(h.rows[k], h.cols[k]);
}

TEST(Assemble, SparsityPattern) {
  BasisSpec spec(6, 8, 0.8, lambda_of_anisotropy(0.4));
  auto h = assemble(spec);
  EXPECT_TRUE(spec.has_bound());
  for (std::size_t k = 0; k < h.vals.size(); ++k) {
    auto [n_i, l_i] = spec.label(h.rows[k]);
    auto [n_j, l_j] = spec.label(h.cols[k]);
    EXPECT_LE(std::abs(l_i - l_j), 2);
    if (l_i > 0 && l_j > 0)
      EXPECT_LE(std::abs(n_i - n_j), 2);
    if (l_i == 0 && l_j == 0)
      EXPECT_EQ(h.rows[k], h.cols[k]); // I_00 = 0: s-block purely diagonal
  }
  // no duplicate slots, upper triangle only, sorted
  for (std::size_t k = 0; k < h.vals.size(); ++k)
    EXPECT_LE(h.rows[k], h.cols[k]);
  for (std::size_t k = 1; k < h.vals.size(); ++k)
    EXPECT_TRUE(h.rows[k - 1] < h.rows[k] ||
                (h.rows[k - 1] == h.rows[k] && h.cols[k - 1] < h.cols[k]));
}

TEST(Assemble, EveryEntryMatchesQuadrature) {
  // small instance, every matrix element vs direct radial quadrature
  const double a = -1.0, A = 0.5;
  BasisSpec spec(2, 4, a, lambda_of_anisotropy(A));
  auto branches = solve_branches(a, spec.n_max);
  auto h = assemble(spec, branches);
  auto dense = h.dense();

  auto radial_fn = [&](int idx) {
    auto [n, l] = spec.label(idx);
    return [&, n, l](double r) {
      if (l == 0) {
        const SWaveBranch& b = branches[spec.has_bound() ? n + 1 : n];
        return trappair::eval_rQ(b, r) / std::max(r, 1e-300);
      }
      return eval_R(n, l, r);
    };
  };

  const int dim = spec.dimension();
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      auto [n_i, l_i] = spec.label(i);
      auto [n_j, l_j] = spec.label(j);
      double h0 = 0.0;
      if (i == j) {
        if (l_i == 0)
          h0 = branches[n_i + (spec.has_bound() ? 1 : 0)].energy();
        else
          h0 = 2.0 * n_i + l_i + 1.5;
      }
      double r2 = 0.0;
      if (std::abs(l_i - l_j) <= 2) {
        auto fi = radial_fn(i), fj = radial_fn(j);
        r2 = test_support::radial_integral(
            [&](double r) { return fi(r) * fj(r) * r * r * r * r; });
      }
      double want = h0 + spec.Lambda * angular_I(l_i, l_j) * r2;
      EXPECT_NEAR(dense[static_cast<std::size_t>(i) * dim + j], want, 1e-8)
          << "i=" << i << " j=" << j;
    }
}

TEST(Assemble, BranchMismatchThrows) {
  BasisSpec spec(3, 2, -1.0, 0.1);
  auto wrong = solve_branches(-2.0, 3);
  EXPECT_THROW(assemble(spec, wrong), trappair::StateError);
  auto short_list = solve_branches(-1.0, 2);
  EXPECT_THROW(assemble(spec, short_list), trappair::DomainError);
}

TEST(Assemble, BudgetEnforced) {
  BasisSpec spec(100, 100, -1.0, 0.3);
  EXPECT_THROW(assemble(spec, solve_branches(-1.0, 100), 1024),
               trappair::ResourceError);
}

TEST(Assemble, DumpFormat) {
  BasisSpec spec(1, 2, 0.0, 0.25);
  auto h = assemble(spec);
  std::ostringstream os;
  h.dump(os);
  std::string first_line = os.str().substr(0, os.str().find('\n'));
  EXPECT_EQ(first_line, "0 0 1.5");
}

} // namespace
