#pragma once

#include <array>
#include <vector>

namespace bstokes {

/// Gauss-Legendre rule on the reference segment [0,1].
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;  // sum to 1
  int degree = 0;               // exact for polynomials up to this degree
};

/// Quadrature rule on the reference triangle (0,0)-(1,0)-(0,1),
/// points stored as barycentric triples, weights summing to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;
};

SegmentRule gauss_legendre(int npoints);
SegmentRule segment_quadrature(int degree);
TriangleRule triangle_quadrature(int degree);

}  // namespace bstokes
