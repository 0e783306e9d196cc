#pragma once

#include "bstokes/trace.hpp"

namespace bstokes {

// Boundary treatment of the interface Laplacian in the fractional norm. The
// +I variant needs no boundary data and is the only admissible choice on a
// closed interface.
enum class FracBc : int { DirichletStrong = 0, DirichletNitsche = 1, NeumannPlusI = 2 };

const char* to_string(FracBc bc);

// Inverse square root of the (shifted) interface Laplacian in the
// weight-scaled inner product, realized by the spectral sum
//   <H u, v> = sum_i lambda_i^{-1/2} (w u_i, u)_S (w u_i, v)_S
// over eigenpairs of (w grad u_i, grad v)_S [+ (w u_i, v)_S] = lambda_i (w u_i, v)_S
// normalized to (w u_i, u_j)_S = delta_ij, with w the constant weight.
struct FractionalOperator {
  FracBc bc = FracBc::NeumannPlusI;
  double weight = 1.0;
  Eigen::VectorXd eigvals;   // ascending, strictly positive
  Eigen::MatrixXd eigvecs;   // full trace-space rows (zero at strongly fixed dofs)
  Eigen::MatrixXd matrix;    // H = (w M) U diag(lambda^-1/2) U^T (w M)
  SpMat weighted_mass;       // w M_S
};

// nitsche_penalty <= 0 selects the default 20 * order^2 / h per boundary facet.
FractionalOperator build_fractional(const TraceSpace& ts, double weight, FracBc bc,
                                    double nitsche_penalty = 0.0);

// R^T H R, sized to the p_P field; symmetric PSD with support only on
// interface dofs.
SpMat lift_to_pressure_block(const FractionalOperator& frac, const TraceSpace& ts);

}  // namespace bstokes
