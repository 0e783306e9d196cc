#include "bstokes/system.hpp"

#include <stdexcept>

namespace bstokes {

KernelCache build_kernel_cache(const Mesh& mesh, const Spaces& sp, ExecPolicy pol) {
  KernelCache kc;
  const auto& u = sp[0];
  const auto& d = sp[1];
  const auto& pf = sp[2];
  const auto& phi = sp[3];
  const auto& pp = sp[4];
  kc.eps_f = assemble_eps_eps(mesh, u, 1.0, pol);
  kc.eps_p = assemble_eps_eps(mesh, d, 1.0, pol);
  kc.tang = assemble_interface_tangential(mesh, u, d, 1.0);
  kc.div_f = assemble_div(mesh, pf, u, pol);
  kc.div_p = assemble_div(mesh, phi, d, pol);
  kc.norm_u = assemble_interface_normal(mesh, pp, u, +1.0);
  kc.norm_d = assemble_interface_normal(mesh, pp, d, -1.0);
  kc.mass_pf = assemble_mass(mesh, pf, 1.0, pol);
  kc.mass_phi = assemble_mass(mesh, phi, 1.0, pol);
  kc.mass_pp = assemble_mass(mesh, pp, 1.0, pol);
  kc.stiff_pp = assemble_stiffness(mesh, pp, 1.0, pol);
  kc.mass_phi_pp = assemble_mixed_mass(mesh, phi, pp, 1.0, pol);
  return kc;
}

SpMat BlockOperator::monolithic() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < kNumFields; ++i) {
    for (int j = 0; j < kNumFields; ++j) {
      const SpMat& b = block[i][j];
      if (b.nonZeros() == 0) continue;
      int ro = spaces[i].global_offset, co = spaces[j].global_offset;
      for (int k = 0; k < b.outerSize(); ++k)
        for (SpMat::InnerIterator it(b, k); it; ++it)
          trip.emplace_back(ro + it.row(), co + it.col(), it.value());
    }
  }
  SpMat mat(dim(), dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

Vec BlockOperator::monolithic_rhs() const {
  Vec b = Vec::Zero(dim());
  for (int i = 0; i < kNumFields; ++i)
    if (rhs[i].size() > 0) b.segment(spaces[i].global_offset, spaces[i].dim()) = rhs[i];
  return b;
}

std::array<Vec, kNumFields> BlockOperator::split(const Vec& x) const {
  std::array<Vec, kNumFields> out;
  for (int i = 0; i < kNumFields; ++i)
    out[i] = x.segment(spaces[i].global_offset, spaces[i].dim());
  return out;
}

double BlockOperator::symmetry_error() const {
  double err = 0.0;
  for (int i = 0; i < kNumFields; ++i) {
    for (int j = 0; j <= i; ++j) {
      SpMat diff = SpMat(block[i][j] - SpMat(block[j][i].transpose()));
      for (int k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
          err = std::max(err, std::abs(it.value()));
    }
  }
  return err;
}

BlockOperator assemble_blocks(const Mesh& mesh, const Spaces& sp, const Params& params,
                              std::shared_ptr<const KernelCache> cache, ExecPolicy pol) {
  params.check();
  BlockOperator op;
  op.mesh = &mesh;
  op.spaces = sp;
  op.cache = cache ? std::move(cache)
                   : std::make_shared<const KernelCache>(build_kernel_cache(mesh, sp, pol));
  const KernelCache& kc = *op.cache;

  for (int i = 0; i < kNumFields; ++i) {
    op.rhs[i] = Vec::Zero(sp[i].dim());
    for (int j = 0; j < kNumFields; ++j) op.block[i][j].resize(sp[i].dim(), sp[j].dim());
  }

  const double ct = params.tangential_coeff();
  op.block[0][0] = 2.0 * params.mu_f * kc.eps_f + ct * kc.tang.uu;
  op.block[0][1] = ct * kc.tang.ud;
  op.block[1][0] = ct * kc.tang.du;
  op.block[1][1] = 2.0 * params.mu_s * kc.eps_p + ct * kc.tang.dd;

  op.block[2][0] = kc.div_f;
  op.block[0][2] = SpMat(kc.div_f.transpose());
  op.block[3][1] = kc.div_p;
  op.block[1][3] = SpMat(kc.div_p.transpose());

  op.block[4][0] = kc.norm_u;
  op.block[0][4] = SpMat(kc.norm_u.transpose());
  op.block[4][1] = kc.norm_d;
  op.block[1][4] = SpMat(kc.norm_d.transpose());

  op.block[3][3] = (-1.0 / params.lambda) * kc.mass_phi;
  op.block[3][4] = (params.alpha / params.lambda) * kc.mass_phi_pp;
  op.block[4][3] = SpMat(op.block[3][4].transpose());
  op.block[4][4] =
      -params.storage_coeff() * kc.mass_pp - (params.kappa / params.mu_f) * kc.stiff_pp;
  return op;
}

BlockRhs assemble_load(const Mesh& mesh, const Spaces& sp, const Params& params,
                       const LoadData& data) {
  BlockRhs rhs;
  for (int i = 0; i < kNumFields; ++i) rhs[i] = Vec::Zero(sp[i].dim());

  if (data.g) {
    auto scaled = [&](const Eigen::Vector2d& x, int c) { return params.rho_f * data.g(x, c); };
    rhs[0] = assemble_volume_load(mesh, sp[0], scaled);
  }
  if (data.f) {
    auto scaled = [&](const Eigen::Vector2d& x, int c) { return params.rho_s * data.f(x, c); };
    rhs[1] = assemble_volume_load(mesh, sp[1], scaled);
  }
  if (data.m_p) {
    auto neg = [&](const Eigen::Vector2d& x, int) { return -data.m_p(x); };
    rhs[4] += assemble_volume_load(mesh, sp[4], neg);
  }
  if (data.g) {
    rhs[4] += assemble_gradient_load(mesh, sp[4], [&](const Eigen::Vector2d& x) {
      return Eigen::Vector2d(-params.rho_f * data.g(x, 0), -params.rho_f * data.g(x, 1));
    });
    rhs[4] += assemble_sigma_load(
        mesh, sp[4], [&](const Eigen::Vector2d& x, const Eigen::Vector2d& n) {
          return params.rho_f * (data.g(x, 0) * n.x() + data.g(x, 1) * n.y());
        });
  }
  if (data.traction)
    rhs[0] += assemble_facet_load(mesh, sp[0], FacetTag::GammaFSigma, data.traction);
  return rhs;
}

void apply_dirichlet(BlockOperator& op) {
  // Lift the right-hand side with the original columns first.
  for (int j = 0; j < kNumFields; ++j) {
    const FieldSpace& spj = op.spaces[j];
    for (int dof = 0; dof < spj.dim(); ++dof) {
      if (!spj.is_dirichlet[dof]) continue;
      double g = spj.dirichlet_value[dof];
      if (g == 0.0) continue;
      for (int i = 0; i < kNumFields; ++i) {
        const SpMat& b = op.block[i][j];
        if (b.nonZeros() == 0) continue;
        for (SpMat::InnerIterator it(b, dof); it; ++it) op.rhs[i][it.row()] -= it.value() * g;
      }
    }
  }
  // Filter constrained rows/columns, set unit diagonal and prescribed values.
  for (int i = 0; i < kNumFields; ++i) {
    for (int j = 0; j < kNumFields; ++j) {
      SpMat& b = op.block[i][j];
      if (b.nonZeros() == 0 && i != j) continue;
      b = eliminate_rows_cols(b, op.spaces[i].is_dirichlet, op.spaces[j].is_dirichlet, i == j);
    }
    const FieldSpace& spi = op.spaces[i];
    for (int dof = 0; dof < spi.dim(); ++dof)
      if (spi.is_dirichlet[dof]) op.rhs[i][dof] = spi.dirichlet_value[dof];
  }
  op.bc_applied = true;
}

BlockOperator assemble_system(const Mesh& mesh, const Params& params, const LoadData& loads,
                              std::shared_ptr<const KernelCache> cache, ExecPolicy pol) {
  Spaces sp = build_spaces(mesh);
  BlockOperator op = assemble_blocks(mesh, sp, params, std::move(cache), pol);
  op.rhs = assemble_load(mesh, sp, params, loads);
  apply_dirichlet(op);
  return op;
}

SpMat eliminate_rows_cols(const SpMat& mat, const std::vector<char>& row_mask,
                          const std::vector<char>& col_mask, bool unit_diagonal) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mat.nonZeros());
  for (int k = 0; k < mat.outerSize(); ++k)
    for (SpMat::InnerIterator it(mat, k); it; ++it)
      if (!row_mask[it.row()] && !col_mask[it.col()]) trip.emplace_back(it.row(), it.col(), it.value());
  if (unit_diagonal)
    for (int i = 0; i < mat.rows(); ++i)
      if (row_mask[i]) trip.emplace_back(i, i, 1.0);
  SpMat out(mat.rows(), mat.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace bstokes
