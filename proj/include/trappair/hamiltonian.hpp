#pragma once

// Sparse real-symmetric Hamiltonian of the relative motion in trap units.
// Basis: interacting s-wave functions Q_n (plus the bound branch when
// a/d > 0) and regular oscillator functions R_nl for even l > 0, m_l = 0.
// H = H0 (diagonal) + Lambda * I_{ll'} * <nl| (r/d)^2 |n'l'>; the prefactor
// mu omega^2 d^2 equals hbar omega exactly in trap units.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/special_functions.hpp"
#include "trappair/swave_branches.hpp"

namespace trappair {

//! Angular factor I_{ll'} = sqrt(4pi/5) <Y_l'0| Y_20 |Y_l0>.
//! Diagonal: <l 2 0 0|l 0>^2 = l(l+1)/((2l-1)(2l+3)).
inline double angular_I(int l, int l_prime) {
  if (l < 0 || l_prime < 0 || l % 2 != 0 || l_prime % 2 != 0)
    throw DomainError("angular_I: l, l' must be even and >= 0");
  if (l_prime == l) {
    double ld = l;
    return ld * (ld + 1.0) / ((2.0 * ld - 1.0) * (2.0 * ld + 3.0));
  }
  if (std::abs(l_prime - l) == 2) {
    double lm = std::min(l, l_prime);
    return 3.0 * (lm + 1.0) * (lm + 2.0) /
           (2.0 * (2.0 * lm + 3.0) * std::sqrt((2.0 * lm + 1.0) * (2.0 * lm + 5.0)));
  }
  return 0.0;
}

//! Radial matrix element <n l| r^2 |n' l'> (units d^2) between regular
//! oscillator functions, even l, l' > 0.
inline double radial_r2(int n, int l, int n_prime, int l_prime) {
  if (l <= 0 || l_prime <= 0)
    throw DomainError("radial_r2: l = 0 rows use swave_coupling");
  if (l % 2 != 0 || l_prime % 2 != 0 || n < 0 || n_prime < 0)
    throw DomainError("radial_r2: invalid indices");
  if (l_prime == l) {
    if (n_prime == n)
      return 2.0 * n + l + 1.5;
    const int m = std::min(n, n_prime);
    if (std::abs(n - n_prime) == 1)
      return -0.5 * std::sqrt(2.0 * (m + 1.0) * (2.0 * m + 2.0 * l + 3.0));
    return 0.0;
  }
  if (l_prime == l + 2) {
    // lower-l state carries l; nonzero for n = n', n'+1, n'+2
    if (n == n_prime)
      return 0.5 * std::sqrt((2.0 * n_prime + 2.0 * l + 3.0) *
                             (2.0 * n_prime + 2.0 * l + 5.0));
    if (n == n_prime + 1)
      return -std::sqrt(2.0 * (n_prime + 1.0) * (2.0 * n_prime + 2.0 * l + 5.0));
    if (n == n_prime + 2)
      return std::sqrt((n_prime + 1.0) * (n_prime + 2.0));
    return 0.0;
  }
  if (l == l_prime + 2)
    return radial_r2(n_prime, l_prime, n, l);
  return 0.0;
}

//! Radial matrix element <n 0| r^2 |n' 2> (units d^2) between the
//! interacting s-wave function of a solved branch and a regular l = 2
//! function.  Sign matches the eval_Q convention (Q_n -> +R_{n0} at a -> 0).
inline double swave_coupling(const SWaveBranch& b, int n_prime) {
  if (n_prime < 0)
    throw DomainError("swave_coupling: n' must be >= 0");
  if (b.dnu_da <= 0.0)
    throw StateError("swave_coupling: branch not solved");
  const double nu = b.nu;
  if (!b.is_bound() && std::abs(nu - std::rint(nu)) < 1e-6) {
    // a -> 0 limiting elements: the regular l=0 pattern
    const int n = b.branch_index;
    if (n_prime == n)
      return 0.5 * std::sqrt((2.0 * n + 3.0) * (2.0 * n + 5.0));
    if (n_prime == n - 1)
      return -std::sqrt(2.0 * n * (2.0 * n + 3.0));
    if (n_prime == n - 2)
      return std::sqrt((n - 1.0) * n);
    return 0.0;
  }
  const double sigma = b.is_bound() ? 1.0 : -1.0;
  const double log_pref =
      0.5 * (std::log(2.0 / M_PI) + std::lgamma(n_prime + 3.5) -
             std::lgamma(n_prime + 1.0));
  const double partial = 1.0 / (n_prime - nu) - 2.0 / (n_prime + 1.0 - nu) +
                         1.0 / (n_prime + 2.0 - nu);
  return sigma * std::exp(log_pref) * b.a_over_d * std::sqrt(b.dnu_da) *
         partial;
}

//! Truncated (n, l) basis.  Flat ordering is l-major with n ascending; when
//! a/d > 0 the bound branch occupies slot 0 of the l = 0 block.
struct BasisSpec {
  int n_max = 0;
  int l_max = 0; // even
  double a_over_d = 0.0;
  double Lambda = 0.0;

  BasisSpec() = default;
  BasisSpec(int n_max_, int l_max_, double a_over_d_, double Lambda_)
      : n_max(n_max_), l_max(l_max_), a_over_d(a_over_d_), Lambda(Lambda_) {
    if (n_max < 0 || l_max < 0 || l_max % 2 != 0)
      throw DomainError("BasisSpec: need n_max >= 0 and even l_max >= 0");
  }

  bool has_bound() const { return a_over_d > 0.0; }
  int n_count() const { return n_max + 1; }
  int s_block_size() const { return n_count() + (has_bound() ? 1 : 0); }
  int l_blocks() const { return l_max / 2 + 1; }
  int dimension() const {
    return s_block_size() + (l_blocks() - 1) * n_count();
  }
  //! flat index of the s-wave slot for branch position i (bound first)
  int index_s(int slot) const { return slot; }
  //! flat index of (n, l) for l >= 2
  int index_nl(int n, int l) const {
    return s_block_size() + (l / 2 - 1) * n_count() + n;
  }
  //! (n, l) label of a flat index; the bound slot reports n = -1, l = 0
  std::pair<int, int> label(int idx) const {
    if (idx < s_block_size())
      return {has_bound() ? idx - 1 : idx, 0};
    const int rest = idx - s_block_size();
    return {rest % n_count(), 2 * (rest / n_count() + 1)};
  }
};

//! Real symmetric sparse matrix in hbar*omega units; upper triangle stored
//! once in (row, col, value) coordinate form, sorted by (row, col).
struct SparseHamiltonian {
  int dim = 0;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> vals;

  std::size_t stored_entries() const { return vals.size(); }

  //! y = H x, expanding the stored upper triangle symmetrically.
  void apply(const double* x, double* y) const {
    std::fill(y, y + dim, 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const int i = rows[k], j = cols[k];
      const double v = vals[k];
      y[i] += v * x[j];
      if (i != j)
        y[j] += v * x[i];
    }
  }

  std::vector<double> dense() const {
    std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      m[static_cast<std::size_t>(rows[k]) * dim + cols[k]] = vals[k];
      m[static_cast<std::size_t>(cols[k]) * dim + rows[k]] = vals[k];
    }
    return m;
  }

  //! Debug/regression dump: one "row col value" line per stored entry,
  //! 17 significant digits.
  void dump(std::ostream& os) const {
    char buf[64];
    for (std::size_t k = 0; k < vals.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", rows[k], cols[k],
                    vals[k]);
      os << buf;
    }
  }
};

//! Assemble the Hamiltonian for a basis spec from solved branches (bound
//! first when a/d > 0, then n = 0..n_max).
inline SparseHamiltonian assemble(const BasisSpec& spec,
                                  const std::vector<SWaveBranch>& branches,
                                  std::size_t memory_budget_bytes = std::size_t(6) << 30) {
  const int dim = spec.dimension();
  const int nc = spec.n_count();
  if (static_cast<int>(branches.size()) != spec.s_block_size())
    throw DomainError("assemble: branch list does not match basis spec");
  for (const SWaveBranch& b : branches)
    if (std::abs(b.a_over_d - spec.a_over_d) > 1e-14 * std::max(1.0, std::abs(spec.a_over_d)))
      throw StateError("assemble: branch solved at a different a/d");

  const double L = spec.Lambda;
  // entry count estimate: diagonal + intra-block bands + inter-block bands
  // + dense s-d strip
  std::size_t est = static_cast<std::size_t>(dim) * 4 +
                    static_cast<std::size_t>(spec.s_block_size()) * nc;
  if (est * (2 * sizeof(int) + sizeof(double)) > memory_budget_bytes)
    throw ResourceError("assemble: estimated matrix storage exceeds budget");

  SparseHamiltonian h;
  h.dim = dim;
  h.rows.reserve(est);
  h.cols.reserve(est);
  h.vals.reserve(est);
  auto push = [&h](int i, int j, double v) {
    if (v == 0.0)
      return;
    h.rows.push_back(std::min(i, j));
    h.cols.push_back(std::max(i, j));
    h.vals.push_back(v);
  };

  // s-wave block: diagonal energies (I_00 = 0, so no anisotropic diagonal)
  for (int s = 0; s < spec.s_block_size(); ++s)
    push(spec.index_s(s), spec.index_s(s), branches[s].energy());

  // regular blocks, l >= 2
  for (int l = 2; l <= spec.l_max; l += 2) {
    const double ill = angular_I(l, l);
    for (int n = 0; n < nc; ++n) {
      double diag = 2.0 * n + l + 1.5;
      push(spec.index_nl(n, l), spec.index_nl(n, l), diag + L * ill * diag);
      if (L != 0.0 && n + 1 < nc)
        push(spec.index_nl(n + 1, l), spec.index_nl(n, l),
             L * ill * radial_r2(n + 1, l, n, l));
    }
  }

  if (L != 0.0) {
    // l -> l+2 couplings between regular blocks
    for (int l = 2; l + 2 <= spec.l_max; l += 2) {
      const double illp = angular_I(l, l + 2);
      for (int np = 0; np < nc; ++np)
        for (int dn = 0; dn <= 2; ++dn) {
          const int n = np + dn;
          if (n >= nc)
            break;
          push(spec.index_nl(n, l), spec.index_nl(np, l + 2),
               L * illp * radial_r2(n, l, np, l + 2));
        }
    }
    // s-wave rows to the l = 2 block (dense strip)
    if (spec.l_max >= 2) {
      const double i02 = angular_I(0, 2);
      for (int s = 0; s < spec.s_block_size(); ++s)
        for (int np = 0; np < nc; ++np)
          push(spec.index_s(s), spec.index_nl(np, 2),
               L * i02 * swave_coupling(branches[s], np));
    }
  }

  // deterministic storage order
  std::vector<std::size_t> perm(h.vals.size());
  for (std::size_t k = 0; k < perm.size(); ++k)
    perm[k] = k;
  std::sort(perm.begin(), perm.end(), [&h](std::size_t a, std::size_t b) {
    if (h.rows[a] != h.rows[b])
      return h.rows[a] < h.rows[b];
    return h.cols[a] < h.cols[b];
  });
  SparseHamiltonian out;
  out.dim = dim;
  out.rows.reserve(perm.size());
  out.cols.reserve(perm.size());
  out.vals.reserve(perm.size());
  for (std::size_t k : perm) {
    out.rows.push_back(h.rows[k]);
    out.cols.push_back(h.cols[k]);
    out.vals.push_back(h.vals[k]);
  }
  return out;
}

//! Convenience: solve the branches and assemble in one step.
inline SparseHamiltonian assemble(const BasisSpec& spec) {
  return assemble(spec, solve_branches(spec.a_over_d, spec.n_max));
}

} // namespace trappair
