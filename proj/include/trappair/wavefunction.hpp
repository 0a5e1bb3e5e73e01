#pragma once

// Relative-motion wavefunction reconstruction from eigenvector coefficients:
// psi(r, theta) = sum_n c_n0 Q_n Y_00 + sum_{l>0,n} c_nl R_nl Y_l0, exported
// as r*psi on a Cartesian (x, 0, z) grid like the paper's figures.  All
// lengths in d, r*psi in d^{-1/2}.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "trappair/errors.hpp"
#include "trappair/hamiltonian.hpp"
#include "trappair/swave_branches.hpp"

namespace trappair {

class Wavefunction {
public:
  Wavefunction(BasisSpec spec, std::vector<SWaveBranch> branches,
               std::vector<double> coeffs)
      : spec_(std::move(spec)), branches_(std::move(branches)),
        coeffs_(std::move(coeffs)) {
    if (static_cast<int>(branches_.size()) != spec_.s_block_size())
      throw StateError("Wavefunction: branch list does not match basis");
    for (const SWaveBranch& b : branches_)
      if (std::abs(b.a_over_d - spec_.a_over_d) >
          1e-14 * std::max(1.0, std::abs(spec_.a_over_d)))
        throw StateError("Wavefunction: branches solved at a different a/d "
                         "than the eigenvector");
    if (static_cast<int>(coeffs_.size()) != spec_.dimension())
      throw DomainError("Wavefunction: coefficient length mismatch");
    double norm2 = 0.0;
    for (double c : coeffs_)
      norm2 += c * c;
    if (std::abs(norm2 - 1.0) > 1e-6)
      throw DomainError("Wavefunction: coefficients are not unit-norm");
  }

  const BasisSpec& spec() const { return spec_; }

  //! r * psi at spherical (r, theta); finite at r = 0.
  double rpsi(double r, double theta) const {
    const double inv_sqrt4pi = 1.0 / std::sqrt(4.0 * M_PI);
    // s-wave part
    double s_sum = 0.0;
    for (int s = 0; s < spec_.s_block_size(); ++s)
      s_sum += coeffs_[spec_.index_s(s)] * eval_rQ(branches_[s], r);
    double total = s_sum * inv_sqrt4pi;
    if (spec_.l_max >= 2 && r > 0.0) {
      // radial block sums, then the Legendre ladder
      std::vector<double> block(spec_.l_blocks() - 1, 0.0);
      for (int l = 2; l <= spec_.l_max; l += 2)
        block[l / 2 - 1] = radial_sum(l, r);
      const double u = std::cos(theta);
      double pm1 = 1.0, pl = u;
      for (int l = 1; l <= spec_.l_max; ++l) {
        if (l > 1) {
          const double next =
              ((2.0 * l - 1.0) * u * pl - (l - 1.0) * pm1) / l;
          pm1 = pl;
          pl = next;
        }
        if (l % 2 == 0)
          total += r * block[l / 2 - 1] *
                   std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI)) * pl;
      }
    }
    return total;
  }

private:
  // sum_n c_nl R_nl(r) via the coefficient-normalized recurrence
  double radial_sum(int l, double r) const {
    const double alpha = l + 0.5;
    const double x = r * r;
    double log_seed =
        0.5 * (std::log(2.0) - std::lgamma(l + 1.5)) - 0.5 * x +
        l * std::log(r);
    if (log_seed < -740.0)
      return 0.0;
    double rm1 = 0.0, rm = std::exp(log_seed);
    double acc = coeffs_[spec_.index_nl(0, l)] * rm;
    for (int m = 1; m <= spec_.n_max; ++m) {
      const double denom = std::sqrt(m * (m + alpha));
      const double next = ((2.0 * m - 1.0 + alpha - x) / denom) * rm -
                          (std::sqrt((m - 1.0) * (m - 1.0 + alpha)) / denom) *
                              rm1;
      rm1 = rm;
      rm = next;
      acc += coeffs_[spec_.index_nl(m, l)] * rm;
    }
    return acc;
  }

  BasisSpec spec_;
  std::vector<SWaveBranch> branches_;
  std::vector<double> coeffs_;
};

struct WavefunctionGrid {
  std::vector<double> x; // ascending, symmetric about 0
  std::vector<double> z;
  std::vector<double> values; // r*psi, z-major: values[iz * nx + ix]
  double A = 0.0;
  double a_over_d = 0.0;
  int level = 0;
  int n_max = 0, l_max = 0;

  double at(int ix, int iz) const {
    return values[static_cast<std::size_t>(iz) * x.size() + ix];
  }
};

//! Sample r*psi(x, 0, z) on a symmetric grid.  Only the x >= 0, z >= 0
//! quadrant is evaluated; the rest follows from azimuthal symmetry and the
//! even-l parity theta -> pi - theta.
inline WavefunctionGrid export_grid(const Wavefunction& wf, double x_extent,
                                    double z_extent, int points_per_axis) {
  if (!(x_extent > 0.0) || !(z_extent > 0.0))
    throw DomainError("export_grid: extents must be positive");
  if (points_per_axis < 2 || points_per_axis % 2 == 0)
    throw DomainError("export_grid: need an odd number of points >= 3 so the "
                      "axes are on the grid");
  WavefunctionGrid g;
  g.A = 0.0;
  g.a_over_d = wf.spec().a_over_d;
  g.n_max = wf.spec().n_max;
  g.l_max = wf.spec().l_max;
  const int n = points_per_axis;
  g.x.resize(n);
  g.z.resize(n);
  for (int i = 0; i < n; ++i) {
    g.x[i] = -x_extent + 2.0 * x_extent * i / (n - 1.0);
    g.z[i] = -z_extent + 2.0 * z_extent * i / (n - 1.0);
  }
  const int half = n / 2; // index of 0
  std::vector<double> quad(static_cast<std::size_t>(half + 1) * (half + 1));
  for (int iz = half; iz < n; ++iz)
    for (int ix = half; ix < n; ++ix) {
      const double x = g.x[ix], z = g.z[iz];
      const double r = std::hypot(x, z);
      const double theta = (r == 0.0) ? 0.0 : std::atan2(x, z);
      quad[static_cast<std::size_t>(iz - half) * (half + 1) + (ix - half)] =
          wf.rpsi(r, theta);
    }
  g.values.resize(static_cast<std::size_t>(n) * n);
  for (int iz = 0; iz < n; ++iz)
    for (int ix = 0; ix < n; ++ix) {
      const int qz = std::abs(iz - half), qx = std::abs(ix - half);
      g.values[static_cast<std::size_t>(iz) * n + ix] =
          quad[static_cast<std::size_t>(qz) * (half + 1) + qx];
    }
  return g;
}

namespace detail {

// antiderivative with d2F/dxdz = x/(x^2+z^2); F(0,0) := 0
inline double weight_antideriv(double x, double z) {
  if (x == 0.0 && z == 0.0)
    return 0.0;
  const double xa = (x == 0.0) ? 0.0 : x * std::atan2(z, x);
  return 0.5 * z * std::log(x * x + z * z) + xa - z;
}

} // namespace detail

//! Norm of psi reconstructed from the grid with the azimuthal volume weight
//! 2 pi x dx dz (x >= 0 half plane).  |psi|^2 = (r psi)^2 / r^2 is singular
//! at the origin, so the weight x/(x^2+z^2) is integrated exactly per cell
//! against the corner-averaged smooth factor (r psi)^2.
inline double grid_norm(const WavefunctionGrid& g) {
  const int nx = static_cast<int>(g.x.size());
  const int nz = static_cast<int>(g.z.size());
  double sum = 0.0;
  for (int iz = 0; iz + 1 < nz; ++iz)
    for (int ix = nx / 2; ix + 1 < nx; ++ix) {
      const double x0 = g.x[ix], x1 = g.x[ix + 1];
      const double z0 = g.z[iz], z1 = g.z[iz + 1];
      const double w = detail::weight_antideriv(x1, z1) -
                       detail::weight_antideriv(x1, z0) -
                       detail::weight_antideriv(x0, z1) +
                       detail::weight_antideriv(x0, z0);
      const double h00 = g.at(ix, iz), h10 = g.at(ix + 1, iz);
      const double h01 = g.at(ix, iz + 1), h11 = g.at(ix + 1, iz + 1);
      const double havg =
          0.25 * (h00 * h00 + h10 * h10 + h01 * h01 + h11 * h11);
      sum += w * havg;
    }
  return 2.0 * M_PI * sum;
}

//! (<z^2>, <x^2>) under the same measure, normalized by the grid norm.
inline std::pair<double, double> grid_second_moments(const WavefunctionGrid& g) {
  const int nx = static_cast<int>(g.x.size());
  const int nz = static_cast<int>(g.z.size());
  const double hx = g.x[1] - g.x[0], hz = g.z[1] - g.z[0];
  double norm = 0.0, zz = 0.0, xx = 0.0;
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = nx / 2; ix < nx; ++ix) {
      const double x = g.x[ix], z = g.z[iz];
      const double r2 = x * x + z * z;
      if (r2 == 0.0)
        continue;
      const double rpsi = g.at(ix, iz);
      double w = ((ix == nx / 2 || ix == nx - 1) ? 0.5 : 1.0) *
                 ((iz == 0 || iz == nz - 1) ? 0.5 : 1.0);
      const double rho = w * rpsi * rpsi / r2 * 2.0 * M_PI * x;
      norm += rho;
      zz += rho * z * z;
      // <x^2> here means the Cartesian x direction; the azimuthal average
      // of the cylindrical radius squared contributes half per axis
      xx += rho * 0.5 * x * x;
    }
  return {zz / norm, xx / norm};
}

//! Long format: "x,z,r_psi" rows, z-major; or a gnuplot matrix with x along
//! the first row and z leading each line.
inline void write_grid_csv(const WavefunctionGrid& g, std::ostream& os,
                           bool gnuplot_matrix = false) {
  char buf[64];
  if (gnuplot_matrix) {
    os << "z\\x";
    for (double x : g.x) {
      std::snprintf(buf, sizeof(buf), ",%.12g", x);
      os << buf;
    }
    os << "\n";
    for (std::size_t iz = 0; iz < g.z.size(); ++iz) {
      std::snprintf(buf, sizeof(buf), "%.12g", g.z[iz]);
      os << buf;
      for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        std::snprintf(buf, sizeof(buf), ",%.12g",
                      g.at(static_cast<int>(ix), static_cast<int>(iz)));
        os << buf;
      }
      os << "\n";
    }
    return;
  }
  os << "x,z,r_psi\n";
  for (std::size_t iz = 0; iz < g.z.size(); ++iz)
    for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", g.x[ix], g.z[iz],
                    g.at(static_cast<int>(ix), static_cast<int>(iz)));
      os << buf;
    }
}

} // namespace trappair
