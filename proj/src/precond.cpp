#include "bstokes/precond.hpp"

#include <stdexcept>

namespace bstokes {

const char* to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::RD: return "rd";
    case PrecondKind::RC: return "rc";
    case PrecondKind::RF: return "rf";
    case PrecondKind::RFDiag: return "rf-diag";
  }
  return "?";
}

PrecondKind precond_from_string(const std::string& name) {
  if (name == "rd") return PrecondKind::RD;
  if (name == "rc") return PrecondKind::RC;
  if (name == "rf") return PrecondKind::RF;
  if (name == "rf-diag" || name == "rf_diag") return PrecondKind::RFDiag;
  throw std::invalid_argument("unknown preconditioner: " + name);
}

void Preconditioner::add_block(int offset, SpMat mat) {
  auto blk = std::make_unique<Block>();
  blk->offset = offset;
  blk->mat = std::move(mat);
  blk->chol.compute(blk->mat);
  bool ok = blk->chol.info() == Eigen::Success;
  if (ok) {
    // the factorization does not reliably flag near-singular pivots, so probe it
    Vec r = random_vector(static_cast<int>(blk->mat.rows()), 0x9e3779b9u);
    Vec x = blk->chol.solve(r);
    ok = x.allFinite() && (blk->mat * x - r).norm() <= 1e-4 * r.norm();
  }
  if (!ok)
    throw std::runtime_error(std::string("preconditioner ") + to_string(kind_) +
                             ": block factorization failed (not SPD)");
  blocks_.push_back(std::move(blk));
}

Vec Preconditioner::apply(const Vec& r) const {
  Vec x(dim_);
  for (const auto& blk : blocks_)
    x.segment(blk->offset, blk->mat.rows()) =
        blk->chol.solve(r.segment(blk->offset, blk->mat.rows()));
  return x;
}

LinOp Preconditioner::op() const {
  return [this](const Vec& r) { return apply(r); };
}

SpMat Preconditioner::matrix() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& blk : blocks_)
    for (int k = 0; k < blk->mat.outerSize(); ++k)
      for (SpMat::InnerIterator it(blk->mat, k); it; ++it)
        trip.emplace_back(blk->offset + it.row(), blk->offset + it.col(), it.value());
  SpMat mat(dim_, dim_);
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

namespace {

// 2x2 sparse block [[a, b], [c, d]] glued into one matrix.
SpMat glue2(const SpMat& a, const SpMat& b, const SpMat& c, const SpMat& d) {
  const int n0 = static_cast<int>(a.rows());
  std::vector<Eigen::Triplet<double>> trip;
  auto push = [&trip](const SpMat& m, int ro, int co) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        trip.emplace_back(ro + it.row(), co + it.col(), it.value());
  };
  push(a, 0, 0);
  push(b, 0, n0);
  push(c, n0, 0);
  push(d, n0, n0);
  SpMat out(a.rows() + d.rows(), a.cols() + d.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Pore-pressure norm (C0 + alpha^2/lambda) M + kappa/mu_f K [+ H], with the
// system's p_P Dirichlet dofs eliminated to a unit diagonal.
SpMat pp_norm_block(const BlockOperator& sys, const Params& p, const SpMat* lifted_h) {
  const KernelCache& kc = *sys.cache;
  SpMat blk = p.storage_coeff() * kc.mass_pp + (p.kappa / p.mu_f) * kc.stiff_pp;
  if (lifted_h) blk += *lifted_h;
  const auto& mask = sys.spaces[4].is_dirichlet;
  return eliminate_rows_cols(blk, mask, mask, true);
}

}  // namespace

Preconditioner build_rd(const BlockOperator& sys, const Params& p) {
  const KernelCache& kc = *sys.cache;
  const Spaces& sp = sys.spaces;
  Preconditioner prec(PrecondKind::RD, sys.dim());
  prec.add_block(sp[0].global_offset, sys.block[0][0]);
  prec.add_block(sp[1].global_offset, sys.block[1][1]);
  prec.add_block(sp[2].global_offset, SpMat(0.5 / p.mu_f * kc.mass_pf));
  prec.add_block(sp[3].global_offset, SpMat((1.0 / p.lambda + 0.5 / p.mu_s) * kc.mass_phi));
  prec.add_block(sp[4].global_offset, pp_norm_block(sys, p, nullptr));
  return prec;
}

Preconditioner build_rc(const BlockOperator& sys, const Params& p) {
  const KernelCache& kc = *sys.cache;
  const Spaces& sp = sys.spaces;
  Preconditioner prec(PrecondKind::RC, sys.dim());
  prec.add_block(sp[0].global_offset,
                 glue2(sys.block[0][0], sys.block[0][1], sys.block[1][0], sys.block[1][1]));
  prec.add_block(sp[2].global_offset, SpMat(0.5 / p.mu_f * kc.mass_pf));
  prec.add_block(sp[3].global_offset, SpMat((1.0 / p.lambda + 0.5 / p.mu_s) * kc.mass_phi));
  prec.add_block(sp[4].global_offset, pp_norm_block(sys, p, nullptr));
  return prec;
}

Preconditioner build_rf(const BlockOperator& sys, const Params& p, const SpMat& lifted_h) {
  const KernelCache& kc = *sys.cache;
  const Spaces& sp = sys.spaces;
  Preconditioner prec(PrecondKind::RF, sys.dim());
  prec.add_block(sp[0].global_offset,
                 glue2(sys.block[0][0], sys.block[0][1], sys.block[1][0], sys.block[1][1]));
  prec.add_block(sp[2].global_offset, SpMat(0.5 / p.mu_f * kc.mass_pf));
  // Coupled (phi, p_P) block; off-diagonal columns at constrained p_P dofs are
  // removed along with the unit-diagonal elimination of the p_P part.
  SpMat phi_blk = (1.0 / p.lambda + 0.5 / p.mu_s) * kc.mass_phi;
  SpMat cross = (-p.alpha / p.lambda) * kc.mass_phi_pp;
  std::vector<char> none(sp[3].dim(), 0);
  cross = eliminate_rows_cols(cross, none, sp[4].is_dirichlet, false);
  SpMat pp_blk = pp_norm_block(sys, p, &lifted_h);
  prec.add_block(sp[3].global_offset, glue2(phi_blk, cross, SpMat(cross.transpose()), pp_blk));
  return prec;
}

Preconditioner build_rf_diag(const BlockOperator& sys, const Params& p, const SpMat& lifted_h) {
  const KernelCache& kc = *sys.cache;
  const Spaces& sp = sys.spaces;
  Preconditioner prec(PrecondKind::RFDiag, sys.dim());
  prec.add_block(sp[0].global_offset,
                 glue2(sys.block[0][0], sys.block[0][1], sys.block[1][0], sys.block[1][1]));
  prec.add_block(sp[2].global_offset, SpMat(0.5 / p.mu_f * kc.mass_pf));
  prec.add_block(sp[3].global_offset, SpMat((1.0 / p.lambda + 0.5 / p.mu_s) * kc.mass_phi));
  prec.add_block(sp[4].global_offset, pp_norm_block(sys, p, &lifted_h));
  return prec;
}

Preconditioner build_preconditioner(PrecondKind kind, const BlockOperator& sys,
                                    const Params& params, const SpMat* lifted_h) {
  switch (kind) {
    case PrecondKind::RD: return build_rd(sys, params);
    case PrecondKind::RC: return build_rc(sys, params);
    case PrecondKind::RF:
    case PrecondKind::RFDiag:
      if (!lifted_h)
        throw std::invalid_argument("build_preconditioner: fractional operator required");
      return kind == PrecondKind::RF ? build_rf(sys, params, *lifted_h)
                                     : build_rf_diag(sys, params, *lifted_h);
  }
  throw std::invalid_argument("build_preconditioner: bad kind");
}

}  // namespace bstokes
