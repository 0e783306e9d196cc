#pragma once

#include <array>
#include <memory>

#include "bstokes/kernels.hpp"
#include "bstokes/params.hpp"

namespace bstokes {

// Parameter-independent matrices of one discretization, reused across
// coefficient sweeps on the same mesh.
struct KernelCache {
  SpMat eps_f, eps_p;           // unit-coefficient strain forms
  TangentialBlocks tang;        // unit-coefficient interface coupling
  SpMat div_f, div_p;           // -(div v, q) blocks: (pF, u) and (phi, d)
  SpMat norm_u, norm_d;         // <q, v.n> blocks: (pP, u) with +, (pP, d) with -
  SpMat mass_pf, mass_phi, mass_pp, stiff_pp;
  SpMat mass_phi_pp;            // rectangular (phi, pP) mass
};

KernelCache build_kernel_cache(const Mesh& mesh, const Spaces& spaces,
                               ExecPolicy pol = default_policy());

// Monolithic 5x5 block operator in the ordering (u, d, p_F, phi, p_P).
struct BlockOperator {
  const Mesh* mesh = nullptr;
  Spaces spaces;
  std::shared_ptr<const KernelCache> cache;
  std::array<std::array<SpMat, kNumFields>, kNumFields> block;
  std::array<Vec, kNumFields> rhs;
  bool bc_applied = false;

  int dim() const { return total_dim(spaces); }
  SpMat monolithic() const;
  Vec monolithic_rhs() const;
  std::array<Vec, kNumFields> split(const Vec& x) const;

  double symmetry_error() const;  // max |A - A^T| entry over all blocks
};

using BlockRhs = std::array<Vec, kNumFields>;

// Populates every nonzero block of the coupled operator (no boundary
// conditions, zero right-hand side). Throws on invalid parameters or when the
// mesh carries no interface.
BlockOperator assemble_blocks(const Mesh& mesh, const Spaces& spaces, const Params& params,
                              std::shared_ptr<const KernelCache> cache = nullptr,
                              ExecPolicy pol = default_policy());

// Body loads: F^F(v) = rho_f (g, v), F^P(w) = rho_s (f, w) and
// G(q) = -(m_P, q) - rho_f (g, grad q) + rho_f <g.n, q>_Sigma, plus an
// optional traction term <t, v> on GammaFSigma.
struct LoadData {
  std::function<double(const Eigen::Vector2d&, int)> f;         // body load, porous
  std::function<double(const Eigen::Vector2d&, int)> g;         // gravity, both terms
  std::function<double(const Eigen::Vector2d&)> m_p;            // fluid source, porous
  std::function<double(const Eigen::Vector2d&, int)> traction;  // on GammaFSigma
};

BlockRhs assemble_load(const Mesh& mesh, const Spaces& spaces, const Params& params,
                       const LoadData& data);

// Symmetric elimination of the Dirichlet dofs recorded in the spaces: lifted
// right-hand side, zeroed rows/columns, unit diagonal. Keeps the operator
// exactly symmetric.
void apply_dirichlet(BlockOperator& op);

// Convenience: blocks + loads + boundary conditions in one call.
BlockOperator assemble_system(const Mesh& mesh, const Params& params,
                              const LoadData& loads = {},
                              std::shared_ptr<const KernelCache> cache = nullptr,
                              ExecPolicy pol = default_policy());

// Zeroes rows/columns of the listed (local) indices; optionally places 1 on
// the diagonal. Shared by the preconditioner builders.
SpMat eliminate_rows_cols(const SpMat& mat, const std::vector<char>& row_mask,
                          const std::vector<char>& col_mask, bool unit_diagonal);

}  // namespace bstokes
