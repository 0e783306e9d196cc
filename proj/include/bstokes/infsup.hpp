#pragma once

#include "bstokes/system.hpp"

namespace bstokes {

// Discrete inf-sup constant of the coupling form: beta^2 is the smallest
// nonzero generalized eigenvalue of (B N_A^-1 B^T) q = beta^2 N_B q, with N_A
// the velocity-displacement norm block and N_B the pressure seminorm built
// from the scaled masses and the lifted fractional interface operator.
// Dense computation, guarded against large pressure spaces.
double discrete_inf_sup(const BlockOperator& sys, const Params& params, const SpMat& lifted_h,
                        int guard = 4000);

}  // namespace bstokes
