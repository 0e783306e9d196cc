#include "bstokes/fractional.hpp"

#include <stdexcept>

#include "bstokes/eig.hpp"
#include "bstokes/elements.hpp"

namespace bstokes {

const char* to_string(FracBc bc) {
  switch (bc) {
    case FracBc::DirichletStrong: return "dirichlet";
    case FracBc::DirichletNitsche: return "nitsche";
    case FracBc::NeumannPlusI: return "neumann";
  }
  return "?";
}

namespace {

// Consistent symmetric Nitsche terms enforcing u = 0 at the polyline
// endpoints: -w [dn(u) v + u dn(v)] + w (penalty / h) u v per endpoint.
void add_nitsche_terms(const TraceSpace& ts, double weight, double penalty,
                       Eigen::MatrixXd& K) {
  for (int bn : ts.boundary_nodes) {
    for (const auto& seg : ts.segments) {
      int end = -1;
      if (seg.nodes[0] == bn) end = 0;
      if (seg.nodes[1] == bn) end = 1;
      if (end < 0) continue;
      double s = end == 0 ? 0.0 : 1.0;
      double N[3], dN[3];
      seg_shape_p2(s, N);
      seg_shape_p2_deriv(s, dN);
      // outward arc-length derivative at the endpoint
      double sign = end == 0 ? -1.0 : 1.0;
      Eigen::Vector3d e(N[0], N[1], N[2]);
      Eigen::Vector3d g = sign / seg.length * Eigen::Vector3d(dN[0], dN[1], dN[2]);
      Eigen::Matrix3d local = -weight * (g * e.transpose() + e * g.transpose()) +
                              weight * penalty / seg.length * (e * e.transpose());
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) K(seg.nodes[a], seg.nodes[b]) += local(a, b);
    }
  }
}

}  // namespace

FractionalOperator build_fractional(const TraceSpace& ts, double weight, FracBc bc,
                                    double nitsche_penalty) {
  if (!(weight > 0.0)) throw std::invalid_argument("build_fractional: weight must be > 0");
  if (ts.closed && bc != FracBc::NeumannPlusI)
    throw std::invalid_argument("build_fractional: Dirichlet variant on a closed interface");

  FractionalOperator frac;
  frac.bc = bc;
  frac.weight = weight;
  frac.weighted_mass = trace_mass(ts, weight);

  const int n = ts.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd(frac.weighted_mass);
  Eigen::MatrixXd K = Eigen::MatrixXd(trace_stiffness(ts, weight));

  if (bc == FracBc::NeumannPlusI) {
    K += M;
    EigResult eig = generalized_sym_eig(K, M);
    frac.eigvals = eig.values;
    frac.eigvecs = eig.vectors;
  } else if (bc == FracBc::DirichletNitsche) {
    if (nitsche_penalty < 0.0)
      throw std::invalid_argument("build_fractional: negative Nitsche penalty");
    double penalty = nitsche_penalty > 0.0 ? nitsche_penalty : 20.0 * 2.0 * 2.0;
    add_nitsche_terms(ts, weight, penalty, K);
    EigResult eig = generalized_sym_eig(K, M);
    frac.eigvals = eig.values;
    frac.eigvecs = eig.vectors;
    if (frac.eigvals.minCoeff() <= 0.0)
      throw std::runtime_error("build_fractional: Nitsche penalty too small, spectrum not positive");
  } else {
    // Strong Dirichlet: eliminate endpoint dofs, solve on the interior, embed.
    std::vector<char> fixed(n, 0);
    for (int bn : ts.boundary_nodes) fixed[bn] = 1;
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (!fixed[i]) keep.push_back(i);
    const int ni = static_cast<int>(keep.size());
    Eigen::MatrixXd Ki(ni, ni), Mi(ni, ni);
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < ni; ++j) {
        Ki(i, j) = K(keep[i], keep[j]);
        Mi(i, j) = M(keep[i], keep[j]);
      }
    EigResult eig = generalized_sym_eig(Ki, Mi);
    frac.eigvals = eig.values;
    frac.eigvecs = Eigen::MatrixXd::Zero(n, ni);
    for (int i = 0; i < ni; ++i) frac.eigvecs.row(keep[i]) = eig.vectors.row(i);
  }

  if (frac.eigvals.size() > 0 && frac.eigvals.minCoeff() <= 0.0)
    throw std::runtime_error("build_fractional: nonpositive eigenvalue");

  Eigen::MatrixXd MU = M * frac.eigvecs;
  frac.matrix = MU * frac.eigvals.cwiseSqrt().cwiseInverse().asDiagonal() * MU.transpose();
  return frac;
}

SpMat lift_to_pressure_block(const FractionalOperator& frac, const TraceSpace& ts) {
  SpMat H = frac.matrix.sparseView();
  return SpMat(ts.restriction.transpose() * H * ts.restriction);
}

}  // namespace bstokes
