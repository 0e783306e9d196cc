#include "bstokes/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bstokes {

// Nodes and weights of the n-point Gauss-Legendre rule, computed by Newton
// iteration on the Legendre recurrence and mapped from [-1,1] to [0,1].
SegmentRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least 1 point");
  SegmentRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[i] = 0.5 * (1.0 + x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

SegmentRule segment_quadrature(int degree) {
  int n = (degree + 2) / 2;  // 2n-1 >= degree
  return gauss_legendre(n);
}

// Collapsed-coordinate rule: x = u, y = v(1-u) maps the unit square onto the
// reference triangle with Jacobian (1-u). An n-point Gauss rule per direction
// integrates total degree d exactly when 2n-1 >= d+1.
TriangleRule triangle_quadrature(int degree) {
  int n = (degree + 3) / 2;
  SegmentRule g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = degree;
  rule.barycentric.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double u = g.points[i];
      double v = g.points[j];
      double x = u;
      double y = v * (1.0 - u);
      rule.barycentric.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace bstokes
