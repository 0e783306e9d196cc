#pragma once

#include <array>

namespace bstokes {

// Lagrange basis on the reference triangle with barycentric coordinates
// (l0, l1, l2) = (1-x-y, x, y). Node order: vertices 0..2, then for order 2
// the midpoint opposite vertex k at local index 3+k (edge between vertices
// k+1 and k+2 mod 3). Reference gradients are with respect to (x, y).

inline int tri_num_nodes(int order) { return order == 1 ? 3 : 6; }

inline void tri_shape(int order, const std::array<double, 3>& l, double N[6]) {
  if (order == 1) {
    N[0] = l[0];
    N[1] = l[1];
    N[2] = l[2];
    return;
  }
  N[0] = l[0] * (2.0 * l[0] - 1.0);
  N[1] = l[1] * (2.0 * l[1] - 1.0);
  N[2] = l[2] * (2.0 * l[2] - 1.0);
  N[3] = 4.0 * l[1] * l[2];
  N[4] = 4.0 * l[2] * l[0];
  N[5] = 4.0 * l[0] * l[1];
}

// G[a] = (dN_a/dx, dN_a/dy) on the reference triangle.
inline void tri_shape_grad(int order, const std::array<double, 3>& l, double G[6][2]) {
  static constexpr double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (order == 1) {
    for (int a = 0; a < 3; ++a) {
      G[a][0] = dl[a][0];
      G[a][1] = dl[a][1];
    }
    return;
  }
  for (int v = 0; v < 3; ++v) {
    double c = 4.0 * l[v] - 1.0;
    G[v][0] = c * dl[v][0];
    G[v][1] = c * dl[v][1];
  }
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;
    G[3 + k][0] = 4.0 * (l[i] * dl[j][0] + l[j] * dl[i][0]);
    G[3 + k][1] = 4.0 * (l[i] * dl[j][1] + l[j] * dl[i][1]);
  }
}

// Quadratic basis on the reference segment [0,1]; nodes: endpoints then midpoint.
inline void seg_shape_p2(double s, double N[3]) {
  N[0] = (1.0 - s) * (1.0 - 2.0 * s);
  N[1] = s * (2.0 * s - 1.0);
  N[2] = 4.0 * s * (1.0 - s);
}

inline void seg_shape_p2_deriv(double s, double dN[3]) {
  dN[0] = 4.0 * s - 3.0;
  dN[1] = 4.0 * s - 1.0;
  dN[2] = 4.0 - 8.0 * s;
}

}  // namespace bstokes
