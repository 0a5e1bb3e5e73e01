#pragma once

// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes).

#include <algorithm>
#include <cmath>
#include <vector>

#include "trappair/errors.hpp"

namespace trappair {

class Pchip {
public:
  Pchip() = default;

  static Pchip fit(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
      throw DomainError("Pchip: need at least two nodes");
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1]))
        throw DomainError("Pchip: nodes must be strictly increasing");
    Pchip p;
    p.x_ = std::move(x);
    p.y_ = std::move(y);
    const std::size_t n = p.x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = p.x_[i + 1] - p.x_[i];
      delta[i] = (p.y_[i + 1] - p.y_[i]) / h[i];
    }
    p.d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        p.d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        p.d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (s * d0 <= 0.0)
        s = 0.0;
      else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
        s = 3.0 * d0;
      return s;
    };
    if (n == 2) {
      p.d_[0] = p.d_[1] = delta[0];
    } else {
      p.d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
      p.d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
    return p;
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  bool in_domain(double t) const { return t >= x_.front() && t <= x_.back(); }

  double eval(double t) const {
    if (!in_domain(t))
      throw RangeError("Pchip: evaluation outside the fitted range");
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = (it == x_.begin()) ? 0 : (it - x_.begin() - 1);
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y_[i] * (2.0 * s3 - 3.0 * s2 + 1.0) +
           h * d_[i] * (s3 - 2.0 * s2 + s) + y_[i + 1] * (-2.0 * s3 + 3.0 * s2) +
           h * d_[i + 1] * (s3 - s2);
  }

private:
  std::vector<double> x_, y_, d_;
};

} // namespace trappair
