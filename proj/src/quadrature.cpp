#include "dpg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpg/error.hpp"

namespace dpg {

Quadrature1D gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: need at least one point");
  Quadrature1D q;
  q.points.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.points[n - 1 - i] = 0.5 * (x + 1.0);
    q.weights[n - 1 - i] = 0.5 * w;
  }
  return q;
}

std::vector<double> gauss_lobatto_nodes(int n) {
  if (n < 2) throw InputError("gauss_lobatto_nodes: need at least two nodes");
  const int N = n - 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::cos(std::numbers::pi * i / N);
  // Fixed-point iteration on (1 - x^2) P'_N(x) = 0 via the Legendre recurrence.
  std::vector<double> P(n);
  for (int it = 0; it < 200; ++it) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      double p0 = 1.0;
      double p1 = x[i];
      for (int k = 2; k <= N; ++k) {
        const double pk = ((2.0 * k - 1.0) * x[i] * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pN = N == 1 ? x[i] : p1;
      const double pNm1 = N == 1 ? 1.0 : p0;
      const double xnew = x[i] - (x[i] * pN - pNm1) / (n * pN);
      change = std::max(change, std::abs(xnew - x[i]));
      x[i] = xnew;
    }
    if (change < 1e-15) break;
  }
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = 0.5 * (1.0 - x[i]);
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

Quadrature2D tensor_rule(const Quadrature1D& rule) {
  Quadrature2D q;
  const std::size_t n = rule.size();
  q.points.reserve(n * n);
  q.weights.reserve(n * n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      q.points.push_back({rule.points[ix], rule.points[iy]});
      q.weights.push_back(rule.weights[ix] * rule.weights[iy]);
    }
  return q;
}

}  // namespace dpg
