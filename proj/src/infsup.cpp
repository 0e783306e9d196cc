#include "bstokes/infsup.hpp"

#include <Eigen/SparseCholesky>
#include <stdexcept>

#include "bstokes/eig.hpp"

namespace bstokes {

double discrete_inf_sup(const BlockOperator& sys, const Params& p, const SpMat& lifted_h,
                        int guard) {
  const Spaces& sp = sys.spaces;
  const int nu = sp[0].dim(), nd = sp[1].dim();
  const int npf = sp[2].dim(), nphi = sp[3].dim(), npp = sp[4].dim();
  const int nv = nu + nd, np = npf + nphi + npp;
  if (np > guard) throw std::invalid_argument("discrete_inf_sup: pressure space exceeds guard");
  if (!sys.bc_applied) throw std::invalid_argument("discrete_inf_sup: apply BCs first");

  // Velocity norm block (with boundary conditions) and the coupling rows.
  std::vector<Eigen::Triplet<double>> atrip, btrip;
  auto push = [](std::vector<Eigen::Triplet<double>>& trip, const SpMat& m, int ro, int co) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        trip.emplace_back(ro + it.row(), co + it.col(), it.value());
  };
  push(atrip, sys.block[0][0], 0, 0);
  push(atrip, sys.block[0][1], 0, nu);
  push(atrip, sys.block[1][0], nu, 0);
  push(atrip, sys.block[1][1], nu, nu);
  SpMat na(nv, nv);
  na.setFromTriplets(atrip.begin(), atrip.end());

  push(btrip, sys.block[2][0], 0, 0);
  push(btrip, sys.block[3][1], npf, nu);
  push(btrip, sys.block[4][0], npf + nphi, 0);
  push(btrip, sys.block[4][1], npf + nphi, nu);
  SpMat b(np, nv);
  b.setFromTriplets(btrip.begin(), btrip.end());

  Eigen::SimplicialLLT<SpMat> llt(na);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("discrete_inf_sup: velocity block not SPD");
  Eigen::MatrixXd bt = Eigen::MatrixXd(SpMat(b.transpose()));
  Eigen::MatrixXd schur = Eigen::MatrixXd(b) * llt.solve(bt);

  // Pressure seminorm: scaled masses plus the fractional interface term, with
  // constrained p_P rows and columns zeroed (they land in the kernel split).
  const KernelCache& kc = *sys.cache;
  std::vector<Eigen::Triplet<double>> ntrip;
  push(ntrip, SpMat(0.5 / p.mu_f * kc.mass_pf), 0, 0);
  push(ntrip, SpMat((0.5 / p.mu_s) * kc.mass_phi), npf, npf);
  const auto& mask = sp[4].is_dirichlet;
  push(ntrip, eliminate_rows_cols(lifted_h, mask, mask, false), npf + nphi, npf + nphi);
  SpMat nb(np, np);
  nb.setFromTriplets(ntrip.begin(), ntrip.end());

  double beta_sq = smallest_nonzero_pencil_eigenvalue(schur, Eigen::MatrixXd(nb));
  return std::sqrt(beta_sq);
}

}  // namespace bstokes
