#pragma once

// Lowest eigenpairs of the assembled Hamiltonian, truncation-convergence
// control, parameter-sweep spectrum tables, and the Lambda^2 analysis of
// the trap-induced bound state.
//
// The matrix is diagonal plus a Lambda-scaled coupling whose diagonal grows
// with (n, l), so a diagonally preconditioned block Davidson iteration with
// thick restarts converges in a few dozen steps where plain Lanczos would
// need thousands (spectrum spread ~ 2 n_max + l_max in hbar*omega against
// level gaps ~ 2 A).  Small problems go straight to a dense solver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/hamiltonian.hpp"
#include "trappair/parallel.hpp"
#include "trappair/trap_geometry.hpp"

namespace trappair {

struct EigResult {
  std::vector<double> values;                 // ascending
  std::vector<std::vector<double>> vectors;   // unit norm, sign-fixed
  double max_residual = 0.0;                  // ||Hv - lambda v||
  int iterations = 0;
};

namespace detail {

inline void fix_sign(std::vector<double>& v) {
  std::size_t imax = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      imax = i;
    }
  if (v[imax] < 0.0)
    for (double& x : v)
      x = -x;
}

inline EigResult lowest_k_dense(const SparseHamiltonian& h, int k) {
  const int n = h.dim;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < h.vals.size(); ++e) {
    m(h.rows[e], h.cols[e]) = h.vals[e];
    m(h.cols[e], h.rows[e]) = h.vals[e];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw NumericError("lowest_k: dense eigensolver failed");
  EigResult out;
  out.values.resize(k);
  out.vectors.resize(k);
  for (int i = 0; i < k; ++i) {
    out.values[i] = es.eigenvalues()(i);
    out.vectors[i].assign(es.eigenvectors().col(i).data(),
                          es.eigenvectors().col(i).data() + n);
    fix_sign(out.vectors[i]);
  }
  out.max_residual = 0.0;
  return out;
}

inline std::vector<double> diagonal_of(const SparseHamiltonian& h) {
  std::vector<double> d(h.dim, 0.0);
  for (std::size_t e = 0; e < h.vals.size(); ++e)
    if (h.rows[e] == h.cols[e])
      d[h.rows[e]] = h.vals[e];
  return d;
}

inline EigResult lowest_k_davidson(
    const SparseHamiltonian& h, int k, double tol, int max_iter,
    const std::vector<std::vector<double>>* start = nullptr) {
  const int n = h.dim;
  const int nb = std::min(n, k + std::clamp(k, 4, 12));
  const int m_max = std::min(n, std::max(6 * nb, 120));
  const int keep = std::min(2 * nb, m_max - nb); // thick-restart size

  const std::vector<double> diag = diagonal_of(h);

  // deterministic start: warm-start vectors when given, unit vectors at the
  // smallest diagonal entries otherwise
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&diag](int a, int b) { return diag[a] < diag[b]; });

  Eigen::MatrixXd V(n, m_max), W(n, m_max);
  int m = 0;
  if (start) {
    for (const auto& s : *start) {
      if (static_cast<int>(s.size()) != n || m >= nb)
        continue;
      Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(s.data(), n);
      for (int pass = 0; pass < 2; ++pass)
        if (m > 0)
          t -= V.leftCols(m) * (V.leftCols(m).transpose() * t);
      if (t.norm() < 1e-8)
        continue;
      V.col(m) = t / t.norm();
      h.apply(V.col(m).data(), W.col(m).data());
      ++m;
    }
  }
  for (int j = 0; m < nb && j < n; ++j) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
    t(order[j]) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      if (m > 0)
        t -= V.leftCols(m) * (V.leftCols(m).transpose() * t);
    if (t.norm() < 1e-8)
      continue;
    V.col(m) = t / t.norm();
    h.apply(V.col(m).data(), W.col(m).data());
    ++m;
  }

  Eigen::VectorXd ritz_vals;
  std::vector<double> res_norms(nb, 0.0);
  int next_start = nb; // deterministic stagnation fallback

  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd T = V.leftCols(m).transpose() * W.leftCols(m);
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success)
      throw NumericError("lowest_k: subspace eigensolver failed");
    const int n_ritz = std::min(m, std::max(keep, nb));
    ritz_vals = es.eigenvalues().head(n_ritz);
    Eigen::MatrixXd Y = es.eigenvectors().leftCols(n_ritz);
    Eigen::MatrixXd X = V.leftCols(m) * Y;
    Eigen::MatrixXd WX = W.leftCols(m) * Y;

    // residuals of the nb targets
    bool converged = true;
    for (int i = 0; i < nb; ++i) {
      res_norms[i] = (WX.col(i) - ritz_vals(i) * X.col(i)).norm();
      if (i < k && res_norms[i] > tol)
        converged = false;
    }
    if (converged) {
      EigResult out;
      out.values.assign(ritz_vals.data(), ritz_vals.data() + k);
      out.vectors.resize(k);
      out.max_residual = 0.0;
      for (int i = 0; i < k; ++i) {
        Eigen::VectorXd x = X.col(i) / X.col(i).norm();
        out.vectors[i].assign(x.data(), x.data() + n);
        fix_sign(out.vectors[i]);
        out.max_residual = std::max(out.max_residual, res_norms[i]);
      }
      out.iterations = iter;
      return out;
    }

    // thick restart: keep a window of Ritz vectors, not just the targets.
    // Re-orthonormalize the kept block to stop drift across cycles.
    if (m + nb > m_max) {
      const int kr = std::min(n_ritz, keep);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(X.leftCols(kr));
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, kr);
      Eigen::MatrixXd r_fac =
          qr.matrixQR().topLeftCorner(kr, kr).triangularView<Eigen::Upper>();
      V.leftCols(kr) = q;
      // W q = W X R^{-1}; X is near-orthonormal so R is near-identity
      W.leftCols(kr) =
          r_fac.transpose()
              .triangularView<Eigen::Lower>()
              .solve(WX.leftCols(kr).transpose())
              .transpose();
      m = kr;
    }

    // expand with Olsen-corrected preconditioned residuals; the plain
    // (D - theta)^{-1} r correction stalls once r is nearly parallel to x
    int added = 0;
    for (int i = 0; i < nb && m < m_max; ++i) {
      if (res_norms[i] <= tol)
        continue;
      Eigen::VectorXd r_i = WX.col(i) - ritz_vals(i) * X.col(i);
      Eigen::VectorXd dinv_r(n), dinv_x(n);
      for (int r = 0; r < n; ++r) {
        double denom = diag[r] - ritz_vals(i);
        if (std::abs(denom) < 1e-6)
          denom = (denom < 0.0 ? -1e-6 : 1e-6);
        dinv_r(r) = r_i(r) / denom;
        dinv_x(r) = X.col(i)(r) / denom;
      }
      const double xdx = X.col(i).dot(dinv_x);
      const double eps = (std::abs(xdx) > 1e-300)
                             ? X.col(i).dot(dinv_r) / xdx
                             : 0.0;
      Eigen::VectorXd t = dinv_r - eps * dinv_x;
      // DGKS: repeat classical Gram-Schmidt while the norm keeps collapsing.
      // A strongly reduced but nonzero remainder is exactly the new
      // information near convergence, so the drop threshold must sit at the
      // noise floor, not at "small".
      const double pre0 = t.norm();
      double pre = pre0;
      for (int pass = 0; pass < 4; ++pass) {
        t -= V.leftCols(m) * (V.leftCols(m).transpose() * t);
        const double post = t.norm();
        if (post > 0.5 * pre)
          break;
        pre = post;
      }
      const double norm = t.norm();
      if (norm < 1e-14 || norm < 1e-13 * pre0)
        continue;
      t /= norm;
      t -= V.leftCols(m) * (V.leftCols(m).transpose() * t); // final polish
      if (t.norm() < 0.1)
        continue;
      t.normalize();
      V.col(m) = t;
      h.apply(V.col(m).data(), W.col(m).data());
      ++m;
      ++added;
    }
    if (added == 0) {
      // stagnation: bring in the next deterministic unit vector
      while (next_start < n && m < m_max) {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
        t(order[next_start++]) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
          t -= V.leftCols(m) * (V.leftCols(m).transpose() * t);
        if (t.norm() < 1e-8)
          continue;
        t.normalize();
        V.col(m) = t;
        h.apply(V.col(m).data(), W.col(m).data());
        ++m;
        ++added;
        break;
      }
      if (added == 0)
        throw NumericError("lowest_k: Davidson stagnated",
                           *std::max_element(res_norms.begin(),
                                             res_norms.begin() + k));
    }
  }
  throw NumericError(
      "lowest_k: no convergence after iteration cap",
      *std::max_element(res_norms.begin(), res_norms.begin() + k));
}

} // namespace detail

//! k smallest eigenpairs with residual ||Hv - lambda v|| <= tol.  Optional
//! start vectors (same dimension) seed the iterative path deterministically.
inline EigResult lowest_k(
    const SparseHamiltonian& h, int k, double tol = 1e-9, int max_iter = 3000,
    int dense_threshold = 600,
    const std::vector<std::vector<double>>* start = nullptr) {
  if (k < 1 || k > h.dim)
    throw DomainError("lowest_k: need 1 <= k <= dim");
  if (h.dim <= dense_threshold || 4 * k >= h.dim)
    return detail::lowest_k_dense(h, k);
  return detail::lowest_k_davidson(h, k, tol, max_iter, start);
}

//! Re-express eigenvectors of one truncation in a larger (or different)
//! truncation by (n, l) label; out-of-range components are dropped.
inline std::vector<std::vector<double>> remap_vectors(
    const BasisSpec& from, const BasisSpec& to,
    const std::vector<std::vector<double>>& vecs) {
  std::vector<std::vector<double>> out;
  out.reserve(vecs.size());
  for (const auto& v : vecs) {
    std::vector<double> w(to.dimension(), 0.0);
    for (int i = 0; i < from.dimension() && i < static_cast<int>(v.size());
         ++i) {
      auto [n, l] = from.label(i);
      if (n < 0) { // bound slot
        if (to.has_bound())
          w[to.index_s(0)] = v[i];
        continue;
      }
      if (l == 0 && n <= to.n_max)
        w[to.index_s(n + (to.has_bound() ? 1 : 0))] = v[i];
      else if (l >= 2 && l <= to.l_max && n <= to.n_max)
        w[to.index_nl(n, l)] = v[i];
    }
    out.push_back(std::move(w));
  }
  return out;
}

//! Basis truncation policy for sweep drivers.
struct TruncationPolicy {
  bool auto_converge = false;
  int n_max = 32;
  int l_max = 32;
  double tol_E = 1e-4; // hbar*omega
  int n_cap = 768;
  int l_cap = 768;

  static TruncationPolicy fixed(int n, int l) {
    TruncationPolicy p;
    p.auto_converge = false;
    p.n_max = n;
    p.l_max = l;
    return p;
  }
  static TruncationPolicy automatic(double tol = 1e-4, int n0 = 16, int l0 = 16,
                                    int n_cap = 768, int l_cap = 768) {
    TruncationPolicy p;
    p.auto_converge = true;
    p.tol_E = tol;
    p.n_max = n0;
    p.l_max = l0;
    p.n_cap = n_cap;
    p.l_cap = l_cap;
    return p;
  }
};

struct ConvergedSolution {
  BasisSpec spec;
  EigResult eig;
  double achieved_tol = 0.0; // max eigenvalue change in the last round
};

//! Solve at fixed truncation; `warm` seeds the iterative solver with the
//! eigenvectors of a previous (typically smaller) truncation.
inline ConvergedSolution solve_at(double A, double a_over_d, int k, int n_max,
                                  int l_max, double eig_tol = 1e-9,
                                  const ConvergedSolution* warm = nullptr) {
  ConvergedSolution out;
  out.spec = BasisSpec(n_max, l_max, a_over_d, lambda_of_anisotropy(A));
  if (warm && !warm->eig.vectors.empty()) {
    auto start = remap_vectors(warm->spec, out.spec, warm->eig.vectors);
    out.eig = lowest_k(assemble(out.spec), k, eig_tol, 3000, 600, &start);
  } else {
    out.eig = lowest_k(assemble(out.spec), k, eig_tol);
  }
  return out;
}

//! Double n_max and l_max alternately until all k eigenvalues move by less
//! than tol_E, then report the final basis and spectrum.
inline ConvergedSolution converge(double A, double a_over_d, int k,
                                  double tol_E = 1e-4, int n0 = 16, int l0 = 16,
                                  int n_cap = 768, int l_cap = 768,
                                  double eig_tol = 1e-9) {
  if (!(tol_E > 0.0))
    throw DomainError("converge: tol_E must be > 0");
  ConvergedSolution cur = solve_at(A, a_over_d, k, n0, l0, eig_tol);
  auto diff = [k](const EigResult& x, const EigResult& y) {
    double d = 0.0;
    for (int i = 0; i < k; ++i)
      d = std::max(d, std::abs(x.values[i] - y.values[i]));
    return d;
  };
  double delta_n = 1e300, delta_l = 1e300;
  for (int round = 0; round < 12; ++round) {
    if (cur.spec.n_max < n_cap) {
      ConvergedSolution next = solve_at(
          A, a_over_d, k, std::min(2 * cur.spec.n_max, n_cap), cur.spec.l_max,
          eig_tol, &cur);
      delta_n = diff(cur.eig, next.eig);
      cur = std::move(next);
    }
    if (cur.spec.l_max < l_cap) {
      ConvergedSolution next = solve_at(
          A, a_over_d, k, cur.spec.n_max, std::min(2 * cur.spec.l_max, l_cap),
          eig_tol, &cur);
      delta_l = diff(cur.eig, next.eig);
      cur = std::move(next);
    }
    cur.achieved_tol = std::max(delta_n, delta_l);
    if (cur.achieved_tol < tol_E)
      return cur;
    if (cur.spec.n_max >= n_cap && cur.spec.l_max >= l_cap)
      throw ResourceError(
          "converge: basis caps reached at tolerance " +
          std::to_string(cur.achieved_tol) + " (requested " +
          std::to_string(tol_E) + ")");
  }
  throw ResourceError("converge: did not reach tolerance within round cap");
}

//! Spectrum table over one swept parameter.  Rows may carry named trailing
//! columns (reference lines, deviations) after the E_i block.
struct SpectrumTable {
  std::string parameter_name;
  std::vector<double> parameters;
  std::vector<std::vector<double>> energies; // [point][level (+ trailing)]
  std::vector<std::string> trailing_columns;
  std::vector<int> n_max_used;
  std::vector<int> l_max_used;
  std::vector<std::vector<std::vector<double>>> vectors; // optional
  std::vector<BasisSpec> specs;                          // per point

  int levels() const {
    if (energies.empty())
      return 0;
    return static_cast<int>(energies.front().size()) -
           static_cast<int>(trailing_columns.size());
  }

  void write_csv(std::ostream& os) const {
    char buf[64];
    os << parameter_name;
    for (int i = 1; i <= levels(); ++i)
      os << ",E_" << i;
    for (const std::string& name : trailing_columns)
      os << "," << name;
    os << ",n_max,l_max\n";
    for (std::size_t p = 0; p < parameters.size(); ++p) {
      std::snprintf(buf, sizeof(buf), "%.12g", parameters[p]);
      os << buf;
      for (double e : energies[p]) {
        std::snprintf(buf, sizeof(buf), ",%.12g", e);
        os << buf;
      }
      os << "," << n_max_used[p] << "," << l_max_used[p] << "\n";
    }
  }
};

//! Eigenvalues over a grid of a/d at fixed anisotropy.  Grid points are
//! independent; `threads` bounds the worker count and does not affect the
//! result.
inline SpectrumTable spectrum_vs_a(double A, const std::vector<double>& a_grid,
                                   int k, const TruncationPolicy& policy,
                                   bool with_vectors = false, int threads = 1,
                                   double eig_tol = 1e-9) {
  if (a_grid.empty())
    throw DomainError("spectrum_vs_a: empty grid");
  if (!(A > 0.0))
    throw DomainError("spectrum_vs_a: A must be > 0");
  SpectrumTable t;
  t.parameter_name = "a_over_d";
  t.parameters = a_grid;
  t.energies.resize(a_grid.size());
  t.n_max_used.resize(a_grid.size());
  t.l_max_used.resize(a_grid.size());
  t.specs.resize(a_grid.size());
  if (with_vectors)
    t.vectors.resize(a_grid.size());
  detail::parallel_for(
      static_cast<int>(a_grid.size()), threads, [&](int i) {
        ConvergedSolution s =
            policy.auto_converge
                ? converge(A, a_grid[i], k, policy.tol_E, policy.n_max,
                           policy.l_max, policy.n_cap, policy.l_cap, eig_tol)
                : solve_at(A, a_grid[i], k, policy.n_max, policy.l_max,
                           eig_tol);
        t.energies[i] = s.eig.values;
        t.n_max_used[i] = s.spec.n_max;
        t.l_max_used[i] = s.spec.l_max;
        t.specs[i] = s.spec;
        if (with_vectors)
          t.vectors[i] = std::move(s.eig.vectors);
      });
  return t;
}

//! Least-squares fit E0(A)/hbar*omega = c0 + c2 Lambda^2 of the lowest level
//! over an anisotropy grid at fixed (large) |a|/d.
struct BoundStateFit {
  double c0 = 0.0;
  double c2 = 0.0;
  double max_fit_residual = 0.0;
  std::vector<double> A_values;
  std::vector<double> lambda_sq;
  std::vector<double> energies;
};

inline BoundStateFit bound_state_fit(double a_over_d,
                                     const std::vector<double>& A_grid,
                                     const TruncationPolicy& policy,
                                     int threads = 1) {
  if (A_grid.size() < 2)
    throw DomainError("bound_state_fit: need at least two anisotropies");
  BoundStateFit fit;
  fit.A_values = A_grid;
  fit.lambda_sq.resize(A_grid.size());
  fit.energies.resize(A_grid.size());
  detail::parallel_for(
      static_cast<int>(A_grid.size()), threads, [&](int i) {
        const double L = lambda_of_anisotropy(A_grid[i]);
        fit.lambda_sq[i] = L * L;
        ConvergedSolution s =
            policy.auto_converge
                ? converge(A_grid[i], a_over_d, 1, policy.tol_E, policy.n_max,
                           policy.l_max, policy.n_cap, policy.l_cap)
                : solve_at(A_grid[i], a_over_d, 1, policy.n_max, policy.l_max);
        fit.energies[i] = s.eig.values[0];
      });
  // normal equations for [1, Lambda^2]
  double s0 = static_cast<double>(A_grid.size());
  double s1 = 0.0, s2 = 0.0, b0 = 0.0, b1 = 0.0;
  for (std::size_t i = 0; i < A_grid.size(); ++i) {
    s1 += fit.lambda_sq[i];
    s2 += fit.lambda_sq[i] * fit.lambda_sq[i];
    b0 += fit.energies[i];
    b1 += fit.lambda_sq[i] * fit.energies[i];
  }
  const double det = s0 * s2 - s1 * s1;
  if (std::abs(det) < 1e-12 * std::max(1.0, s2 * s0))
    throw DomainError("bound_state_fit: degenerate grid (Lambda^2 values "
                      "do not span a range)");
  fit.c0 = (s2 * b0 - s1 * b1) / det;
  fit.c2 = (s0 * b1 - s1 * b0) / det;
  for (std::size_t i = 0; i < A_grid.size(); ++i)
    fit.max_fit_residual =
        std::max(fit.max_fit_residual,
                 std::abs(fit.energies[i] - fit.c0 - fit.c2 * fit.lambda_sq[i]));
  return fit;
}

} // namespace trappair
