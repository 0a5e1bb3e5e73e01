#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace trappair {

//! Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendreRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    long double x = std::cos(pi * (static_cast<long double>(i) + 0.75L) /
                             (static_cast<long double>(n) + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L * (1.0L + std::abs(x)))
        break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

} // namespace detail

//! Cached rule lookup.  Rules are computed on first use; the computation is
//! deterministic so results never depend on call order.
inline const GaussLegendreRule& gauss_legendre(std::size_t n) {
  static std::map<std::size_t, GaussLegendreRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

//! Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
long double integrate_gl(F&& f, long double a, long double b, std::size_t n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const long double mid = 0.5L * (a + b);
  const long double half = 0.5L * (b - a);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

//! Integrate f over consecutive panels given by breakpoints.
template <typename F>
long double integrate_panels(F&& f, const std::vector<long double>& breaks,
                             std::size_t n_per_panel) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    sum += integrate_gl(f, breaks[i], breaks[i + 1], n_per_panel);
  return sum;
}

} // namespace trappair
