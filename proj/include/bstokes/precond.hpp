#pragma once

#include <Eigen/SparseCholesky>
#include <memory>

#include "bstokes/fractional.hpp"
#include "bstokes/minres.hpp"
#include "bstokes/system.hpp"

namespace bstokes {

enum class PrecondKind : int { RD = 0, RC = 1, RF = 2, RFDiag = 3 };

const char* to_string(PrecondKind k);
PrecondKind precond_from_string(const std::string& name);

// Block-diagonal Riesz-map preconditioner applied through Cholesky solves of
// its SPD blocks; matrix() exposes the underlying norm matrix for spectral
// studies.
class Preconditioner {
 public:
  struct Block {
    int offset = 0;
    SpMat mat;
    Eigen::SimplicialLLT<SpMat> chol;
  };

  Preconditioner(PrecondKind kind, int dim) : kind_(kind), dim_(dim) {}

  void add_block(int offset, SpMat mat);  // factorizes; throws if not SPD
  Vec apply(const Vec& r) const;
  LinOp op() const;
  SpMat matrix() const;
  PrecondKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<std::unique_ptr<Block>>& blocks() const { return blocks_; }

 private:
  PrecondKind kind_;
  int dim_;
  std::vector<std::unique_ptr<Block>> blocks_;
};

// Fully decoupled diagonal preconditioner: velocity and displacement blocks of
// the operator itself, scaled pressure masses, and the pore-pressure
// mass-plus-diffusion block.
Preconditioner build_rd(const BlockOperator& sys, const Params& params);

// As RD but keeping the tangential velocity-displacement coupling in one
// 2x2 block.
Preconditioner build_rc(const BlockOperator& sys, const Params& params);

// Parameter-robust preconditioner: RC velocity block, scaled p_F mass, and the
// coupled (phi, p_P) block augmented by the lifted fractional interface
// operator.
Preconditioner build_rf(const BlockOperator& sys, const Params& params, const SpMat& lifted_h);

// RF with the (phi, p_P) coupling dropped, keeping the fractional term.
Preconditioner build_rf_diag(const BlockOperator& sys, const Params& params,
                             const SpMat& lifted_h);

Preconditioner build_preconditioner(PrecondKind kind, const BlockOperator& sys,
                                    const Params& params, const SpMat* lifted_h = nullptr);

}  // namespace bstokes
