#pragma once

#include "bstokes/system.hpp"

namespace bstokes {

// Smooth reference solution on the split unit square; the total pressure is
// slaved to displacement and pore pressure through phi = alpha p_P - lambda div d.
struct MmsValue {
  Eigen::Vector2d u;
  Eigen::Matrix2d grad_u;  // row i = grad of component i
  double p_f = 0.0;
  Eigen::Vector2d grad_p_f;
  Eigen::Vector2d d;
  Eigen::Matrix2d grad_d;
  double p_p = 0.0;
  Eigen::Vector2d grad_p_p;
  double phi = 0.0;
  Eigen::Vector2d grad_phi;

  double div_u() const { return grad_u.trace(); }
  double div_d() const { return grad_d.trace(); }
  Eigen::Matrix2d eps_u() const { return 0.5 * (grad_u + grad_u.transpose()); }
  Eigen::Matrix2d eps_d() const { return 0.5 * (grad_d + grad_d.transpose()); }
};

MmsValue mms_exact(const Eigen::Vector2d& x, const Params& params);

using FieldEval = std::function<MmsValue(const Eigen::Vector2d&)>;

// Right-hand side produced by applying every bilinear form of the coupled
// system to the given fields (analytic derivatives, degree-8 quadrature);
// defaults to the manufactured solution. Galerkin consistency then makes the
// discrete solution approximate those fields without hand-derived interface
// corrections.
BlockRhs assemble_mms_load(const Mesh& mesh, const Spaces& spaces, const Params& params,
                           const FieldEval& fields = {});

// Samples the exact solution as Dirichlet data for the constrained dofs.
void set_mms_dirichlet(Spaces& spaces, const Params& params);

// Per-field errors (e_u_h1, e_pf_l2, e_d_h1, e_phi_l2, e_pp_h1) of a solution
// vector in monolithic ordering against the exact fields.
struct MmsErrors {
  double u_h1 = 0.0, pf_l2 = 0.0, d_h1 = 0.0, phi_l2 = 0.0, pp_h1 = 0.0;
};
MmsErrors mms_errors(const BlockOperator& op, const Vec& solution, const Params& params);

// Nodal interpolant of the exact fields, for consistency and initial-guess checks.
Vec mms_interpolant(const Spaces& spaces, const Params& params);

}  // namespace bstokes
