#include <doctest.h>

#include <cmath>

#include "bstokes/quadrature.hpp"

using namespace bstokes;

namespace {

// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!
double tri_monomial(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

double integrate_tri(const TriangleRule& rule, int a, int b) {
  double s = 0.0;
  for (size_t q = 0; q < rule.weights.size(); ++q) {
    double x = rule.barycentric[q][1], y = rule.barycentric[q][2];
    s += rule.weights[q] * std::pow(x, a) * std::pow(y, b);
  }
  return s;
}

}  // namespace

TEST_CASE("segment rules: weight sums and polynomial exactness") {
  for (int deg : {1, 2, 3, 4, 5, 8, 9}) {
    SegmentRule rule = segment_quadrature(deg);
    REQUIRE(rule.degree >= deg);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(std::abs(wsum - 1.0) <= 1e-14);
    for (int p = 0; p <= deg; ++p) {
      double s = 0.0;
      for (size_t i = 0; i < rule.points.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i], p);
      CHECK(std::abs(s - 1.0 / (p + 1)) <= 1e-14);
    }
  }
}

TEST_CASE("triangle rules: weights sum to the reference measure") {
  for (int deg : {2, 4, 8}) {
    TriangleRule rule = triangle_quadrature(deg);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(std::abs(wsum - 0.5) <= 1e-14);
    for (const auto& l : rule.barycentric) {
      CHECK(std::abs(l[0] + l[1] + l[2] - 1.0) <= 1e-14);
      CHECK(l[0] >= 0.0);
      CHECK(l[1] >= 0.0);
      CHECK(l[2] >= 0.0);
    }
  }
}

TEST_CASE("triangle rules: exact for the declared degree") {
  for (int deg : {4, 8}) {
    TriangleRule rule = triangle_quadrature(deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        CHECK(std::abs(integrate_tri(rule, a, b) - tri_monomial(a, b)) <= 1e-14);
  }
}
