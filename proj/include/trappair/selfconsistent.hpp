#pragma once

// Energy-dependent effective scattering length models and the self-consistent
// eigenvalue solver: eigenvalue curves E_i are interpolated as functions of
// u = d/a (smooth through |a| -> infinity, where both signs meet), and the
// self-consistent energies are the fixed points E = E_i(d/a_eff(E, B)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "trappair/eigensolve.hpp"
#include "trappair/errors.hpp"
#include "trappair/parallel.hpp"
#include "trappair/pchip.hpp"
#include "trappair/trap_geometry.hpp"

namespace trappair {

//! Effective scattering length a_eff(E)/d from an s-wave phase shift at
//! collision energy E (hbar*omega): a_eff = -tan(delta0)/k with k d =
//! sqrt(2 E).
inline double a_eff_from_phase(double delta0, double energy) {
  if (!(energy > 0.0))
    throw DomainError("a_eff_from_phase: requires E > 0");
  return -std::tan(delta0) / std::sqrt(2.0 * energy);
}

//! Scattering-length model in trap units: constant, tabulated in energy
//! (optionally per magnetic field), or a parametric resonance
//! a_eff(E, B)/d = a_bg/d + (gamma0/2) / (E - dmu (B - B0)).
class ScatteringModel {
public:
  enum class Kind { constant, table, resonance };

  static ScatteringModel constant(double a_over_d) {
    ScatteringModel m;
    m.kind_ = Kind::constant;
    m.a_bg_ = a_over_d;
    return m;
  }

  //! Single-field table: strictly increasing energies (hbar*omega),
  //! a_eff/d values; monotone cubic between nodes, exact at nodes.
  static ScatteringModel table(std::vector<double> energy,
                               std::vector<double> a_over_d) {
    ScatteringModel m;
    m.kind_ = Kind::table;
    m.tables_.push_back(
        {std::numeric_limits<double>::quiet_NaN(),
         Pchip::fit(std::move(energy), std::move(a_over_d))});
    return m;
  }

  //! Per-field tables for sweeps; B values must be distinct.
  static ScatteringModel table_set(std::vector<double> B_values,
                                   std::vector<std::vector<double>> energies,
                                   std::vector<std::vector<double>> a_values) {
    if (B_values.empty() || B_values.size() != energies.size() ||
        B_values.size() != a_values.size())
      throw DomainError("ScatteringModel: inconsistent table set");
    ScatteringModel m;
    m.kind_ = Kind::table;
    for (std::size_t i = 0; i < B_values.size(); ++i)
      m.tables_.push_back({B_values[i], Pchip::fit(std::move(energies[i]),
                                                   std::move(a_values[i]))});
    return m;
  }

  static ScatteringModel resonance(double a_bg_over_d, double gamma0,
                                   double dmu_per_mT, double B0_mT) {
    ScatteringModel m;
    m.kind_ = Kind::resonance;
    m.a_bg_ = a_bg_over_d;
    m.gamma0_ = gamma0;
    m.dmu_ = dmu_per_mT;
    m.B0_ = B0_mT;
    return m;
  }

  Kind kind() const { return kind_; }
  bool field_dependent() const {
    return kind_ == Kind::resonance ||
           (kind_ == Kind::table && !std::isnan(tables_.front().B));
  }

  //! a_eff(E [, B]) in units of d.
  double a_eff(double energy,
               double B = std::numeric_limits<double>::quiet_NaN()) const {
    switch (kind_) {
    case Kind::constant:
      return a_bg_;
    case Kind::table: {
      const Pchip& t = select_table(B);
      if (!t.in_domain(energy))
        throw RangeError("ScatteringModel: E = " + std::to_string(energy) +
                         " outside the tabulated range (no extrapolation)");
      return t.eval(energy);
    }
    case Kind::resonance: {
      if (std::isnan(B))
        throw DomainError("ScatteringModel: resonance model needs B");
      const double det = energy - dmu_ * (B - B0_);
      if (det == 0.0)
        throw DomainError("ScatteringModel: exactly on the resonance pole");
      return a_bg_ + 0.5 * gamma0_ / det;
    }
    }
    throw StateError("ScatteringModel: invalid kind");
  }

  //! Energy domain over which a_eff may be evaluated.
  std::pair<double, double> energy_domain(double B) const {
    if (kind_ == Kind::table) {
      const Pchip& t = select_table(B);
      return {t.min_x(), t.max_x()};
    }
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

private:
  struct BTable {
    double B;
    Pchip curve;
  };

  const Pchip& select_table(double B) const {
    if (std::isnan(tables_.front().B))
      return tables_.front().curve;
    for (const BTable& t : tables_)
      if (std::abs(t.B - B) <= 1e-12 * std::max(1.0, std::abs(B)))
        return t.curve;
    throw RangeError("ScatteringModel: no table at B = " + std::to_string(B));
  }

  Kind kind_ = Kind::constant;
  double a_bg_ = 0.0;
  double gamma0_ = 0.0; // hbar*omega * d
  double dmu_ = 0.0;    // hbar*omega per mT
  double B0_ = 0.0;     // mT
  std::vector<BTable> tables_;
};

//! Interpolable eigenvalue branch family E_i(u), u = d/a.
struct SpectrumBranches {
  double A = 0.0;
  int k = 0;
  std::vector<double> u_grid;
  std::vector<Pchip> curves; // one per branch, ascending eigenvalue index
  std::vector<std::vector<double>> samples; // [branch][grid]

  double u_min() const { return u_grid.front(); }
  double u_max() const { return u_grid.back(); }

  double eval(int branch, double u) const {
    return curves.at(branch).eval(u);
  }
  //! energy range covered by one branch
  std::pair<double, double> energy_range(int branch) const {
    const auto& s = samples.at(branch);
    auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return {*lo, *hi};
  }
};

//! Build the branch family by direct diagonalization on a uniform u grid.
inline SpectrumBranches spectrum_function_u(double A, int k, double u_lo,
                                            double u_hi, int samples,
                                            const TruncationPolicy& policy,
                                            int threads = 1,
                                            double verify_tol = 0.0) {
  if (!(u_hi > u_lo))
    throw DomainError("spectrum_function: need u_hi > u_lo");
  if (samples < 4)
    throw DomainError("spectrum_function: need at least 4 samples");
  SpectrumBranches out;
  out.A = A;
  out.k = k;
  out.u_grid.resize(samples);
  for (int i = 0; i < samples; ++i)
    out.u_grid[i] = u_lo + (u_hi - u_lo) * i / (samples - 1.0);
  std::vector<std::vector<double>> energies(samples);
  detail::parallel_for(samples, threads, [&](int i) {
    const double u = out.u_grid[i];
    // u = 0 is |a| = infinity; represent by a huge scattering length
    const double a = (u == 0.0) ? 1e12 : 1.0 / u;
    ConvergedSolution s =
        policy.auto_converge
            ? converge(A, a, k, policy.tol_E, policy.n_max, policy.l_max,
                       policy.n_cap, policy.l_cap)
            : solve_at(A, a, k, policy.n_max, policy.l_max);
    energies[i] = s.eig.values;
  });
  out.samples.assign(k, std::vector<double>(samples));
  for (int b = 0; b < k; ++b)
    for (int i = 0; i < samples; ++i)
      out.samples[b][i] = energies[i][b];
  for (int b = 0; b < k; ++b)
    out.curves.push_back(Pchip::fit(out.u_grid, out.samples[b]));

  if (verify_tol > 0.0) {
    // held-out midpoints of a coarse subset of intervals
    const int stride = std::max(1, samples / 16);
    double worst = 0.0;
    std::vector<double> mids;
    for (int i = 0; i + 1 < samples; i += stride)
      mids.push_back(0.5 * (out.u_grid[i] + out.u_grid[i + 1]));
    std::vector<std::vector<double>> mid_E(mids.size());
    detail::parallel_for(static_cast<int>(mids.size()), threads, [&](int i) {
      const double u = mids[i];
      const double a = (u == 0.0) ? 1e12 : 1.0 / u;
      ConvergedSolution s =
          policy.auto_converge
              ? converge(A, a, k, policy.tol_E, policy.n_max, policy.l_max,
                         policy.n_cap, policy.l_cap)
              : solve_at(A, a, k, policy.n_max, policy.l_max);
      mid_E[i] = s.eig.values;
    });
    for (std::size_t i = 0; i < mids.size(); ++i)
      for (int b = 0; b < k; ++b)
        worst = std::max(worst,
                         std::abs(out.eval(b, mids[i]) - mid_E[i][b]));
    if (worst > verify_tol)
      throw NumericError(
          "spectrum_function: interpolation error " + std::to_string(worst) +
          " exceeds " + std::to_string(verify_tol) +
          "; increase the sample count",
          worst);
  }
  return out;
}

//! Spec-facing overload in terms of a single-signed a/d interval.
inline SpectrumBranches spectrum_function(double A, int k, double a_lo,
                                          double a_hi, int samples,
                                          const TruncationPolicy& policy,
                                          int threads = 1,
                                          double verify_tol = 0.0) {
  if (a_lo <= 0.0 && a_hi >= 0.0)
    throw DomainError(
        "spectrum_function: a-range must not cross a = 0 (bound-state "
        "divergence); use the u = d/a parametrization for |a| -> infinity");
  double u1 = 1.0 / a_hi, u2 = 1.0 / a_lo;
  if (u1 > u2)
    std::swap(u1, u2);
  return spectrum_function_u(A, k, u1, u2, samples, policy, threads,
                             verify_tol);
}

struct SelfConsistentSolution {
  int branch = 0;
  double energy = 0.0;       // hbar*omega
  double a_eff_over_d = 0.0; // at the solution energy
  double residual = 0.0;     // |E - E_branch(d/a_eff(E))|
  int multiplicity = 1;      // roots found on this branch
};

//! All fixed points E = E_i(d/a_eff(E, B)) per branch, by a sign-scan over
//! a fixed 2000-point energy mesh refined with bisection.  Mesh points where
//! d/a_eff leaves the interpolated u range are skipped; if a whole branch
//! has no admissible mesh point a RangeError identifies it.
inline std::vector<SelfConsistentSolution> solve_selfconsistent(
    const SpectrumBranches& branches, const ScatteringModel& model,
    double B = std::numeric_limits<double>::quiet_NaN(), int mesh_points = 2000,
    double bisect_tol = 1e-10) {
  std::vector<SelfConsistentSolution> out;

  if (model.kind() == ScatteringModel::Kind::constant) {
    // energy-independent: the fixed point is E_i(d/a) itself
    const double a = model.a_eff(0.0, B);
    const double u = (a == 0.0) ? std::numeric_limits<double>::infinity()
                                : 1.0 / a;
    for (int b = 0; b < branches.k; ++b) {
      if (u < branches.u_min() || u > branches.u_max())
        throw RangeError("solve_selfconsistent: d/a = " + std::to_string(u) +
                         " outside the interpolated range on branch " +
                         std::to_string(b));
      SelfConsistentSolution s;
      s.branch = b;
      s.energy = branches.eval(b, u);
      s.a_eff_over_d = a;
      s.residual = 0.0;
      out.push_back(s);
    }
    return out;
  }

  for (int b = 0; b < branches.k; ++b) {
    auto [e_lo, e_hi] = branches.energy_range(b);
    auto [m_lo, m_hi] = model.energy_domain(B);
    const double lo = std::max(e_lo, m_lo), hi = std::min(e_hi, m_hi);
    if (!(hi > lo))
      continue;

    auto mismatch = [&](double E, bool& valid) -> double {
      double a;
      try {
        a = model.a_eff(E, B);
      } catch (const Error&) {
        valid = false;
        return 0.0;
      }
      const double u = (a == 0.0) ? std::numeric_limits<double>::infinity()
                                  : 1.0 / a;
      if (u < branches.u_min() || u > branches.u_max()) {
        valid = false;
        return 0.0;
      }
      valid = true;
      return branches.eval(b, u) - E;
    };

    int found = 0;
    bool any_valid = false;
    double prev_E = lo;
    bool prev_valid = false;
    double prev_F = 0.0;
    std::vector<SelfConsistentSolution> roots;
    for (int i = 0; i <= mesh_points; ++i) {
      const double E = lo + (hi - lo) * i / mesh_points;
      bool valid = false;
      const double F = mismatch(E, valid);
      any_valid = any_valid || valid;
      if (valid && prev_valid && F * prev_F <= 0.0 && (F != 0.0 || prev_F != 0.0)) {
        // bisection refine
        double x0 = prev_E, x1 = E, f0 = prev_F;
        for (int it = 0; it < 200 && (x1 - x0) > bisect_tol; ++it) {
          const double xm = 0.5 * (x0 + x1);
          bool mv = false;
          const double fm = mismatch(xm, mv);
          if (!mv)
            throw RangeError(
                "solve_selfconsistent: a_eff left the interpolated range "
                "during refinement on branch " + std::to_string(b) +
                " near E = " + std::to_string(xm));
          if (fm * f0 <= 0.0)
            x1 = xm;
          else {
            x0 = xm;
            f0 = fm;
          }
        }
        SelfConsistentSolution s;
        s.branch = b;
        s.energy = 0.5 * (x0 + x1);
        s.a_eff_over_d = model.a_eff(s.energy, B);
        bool v = false;
        s.residual = std::abs(mismatch(s.energy, v));
        roots.push_back(s);
        ++found;
      }
      prev_E = E;
      prev_valid = valid;
      prev_F = F;
    }
    if (!any_valid)
      throw RangeError("solve_selfconsistent: a_eff(E)/d is outside the "
                       "interpolated a-range for every mesh energy on branch " +
                       std::to_string(b));
    for (auto& s : roots)
      s.multiplicity = found;
    out.insert(out.end(), roots.begin(), roots.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.energy != y.energy)
      return x.energy < y.energy;
    return x.branch < y.branch;
  });
  return out;
}

//! Energy levels versus magnetic field: per-B self-consistent solve.  The
//! output table carries the k lowest solutions per field plus the
//! non-interacting lowest level as a reference column.
inline SpectrumTable feshbach_sweep(const SpectrumBranches& branches,
                                    const ScatteringModel& model,
                                    const std::vector<double>& B_grid,
                                    int threads = 1) {
  if (B_grid.empty())
    throw DomainError("feshbach_sweep: empty B grid");
  if (!model.field_dependent())
    throw DomainError("feshbach_sweep: model has no magnetic-field "
                      "dependence");
  SpectrumTable t;
  t.parameter_name = "B_mT";
  t.parameters = B_grid;
  t.energies.assign(B_grid.size(), {});
  t.trailing_columns = {"E_free"};
  t.n_max_used.assign(B_grid.size(), 0);
  t.l_max_used.assign(B_grid.size(), 0);
  const double e_free = noninteracting_ground_energy(branches.A);
  detail::parallel_for(
      static_cast<int>(B_grid.size()), threads, [&](int i) {
        auto roots = solve_selfconsistent(branches, model, B_grid[i]);
        std::vector<double> row;
        for (const auto& r : roots) {
          if (static_cast<int>(row.size()) >= branches.k)
            break;
          row.push_back(r.energy);
        }
        row.resize(branches.k, std::numeric_limits<double>::quiet_NaN());
        row.push_back(e_free);
        t.energies[i] = std::move(row);
      });
  return t;
}

} // namespace trappair
