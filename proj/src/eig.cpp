#include "bstokes/eig.hpp"

#include <stdexcept>

namespace bstokes {

EigResult generalized_sym_eig(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
  if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows())
    throw std::invalid_argument("generalized_sym_eig: size mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("generalized_sym_eig: M is not SPD");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M,
                                                               Eigen::ComputeEigenvectors |
                                                                   Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized_sym_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double spectral_condition_number(const Eigen::SparseMatrix<double>& A,
                                 const Eigen::SparseMatrix<double>& B, int guard) {
  if (A.rows() > guard)
    throw std::invalid_argument("spectral_condition_number: system exceeds dense guard");
  Eigen::MatrixXd Ad = Eigen::MatrixXd(A);
  Eigen::MatrixXd Bd = Eigen::MatrixXd(B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Bd, Eigen::EigenvaluesOnly |
                                                                           Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_condition_number: eigensolver failed");
  Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  return mags.maxCoeff() / mags.minCoeff();
}

double smallest_nonzero_pencil_eigenvalue(const Eigen::MatrixXd& S, const Eigen::MatrixXd& N,
                                          double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(N);
  const Eigen::VectorXd d = en.eigenvalues();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) throw std::invalid_argument("pencil: N has no positive part");
  const double dcut = dmax * 1e-12;

  std::vector<int> pos, ker;
  for (int i = 0; i < d.size(); ++i) (d[i] > dcut ? pos : ker).push_back(i);
  Eigen::MatrixXd Vp(N.rows(), pos.size()), V0(N.rows(), ker.size());
  Eigen::VectorXd dp(pos.size());
  for (size_t i = 0; i < pos.size(); ++i) {
    Vp.col(i) = en.eigenvectors().col(pos[i]);
    dp[i] = d[pos[i]];
  }
  for (size_t i = 0; i < ker.size(); ++i) V0.col(i) = en.eigenvectors().col(ker[i]);

  // Schur complement of the kernel block: the infimum over kernel directions.
  Eigen::MatrixXd Spp = Vp.transpose() * S * Vp;
  if (V0.cols() > 0) {
    Eigen::MatrixXd S00 = V0.transpose() * S * V0;
    Eigen::MatrixXd Sp0 = Vp.transpose() * S * V0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(S00);
    const Eigen::VectorXd s0 = e0.eigenvalues();
    const double scut = std::max(s0.cwiseAbs().maxCoeff(), 1.0e-300) * 1e-12;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s0.size());
    for (int i = 0; i < s0.size(); ++i)
      if (s0[i] > scut) inv[i] = 1.0 / s0[i];
    Eigen::MatrixXd pinv =
        e0.eigenvectors() * inv.asDiagonal() * e0.eigenvectors().transpose();
    Spp -= Sp0 * pinv * Sp0.transpose();
  }

  Eigen::MatrixXd D = dp.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Spp, D, Eigen::EigenvaluesOnly |
                                                                           Eigen::Ax_lBx);
  const Eigen::VectorXd theta = es.eigenvalues();
  const double tmax = theta.cwiseAbs().maxCoeff();
  for (int i = 0; i < theta.size(); ++i)
    if (theta[i] > tmax * rel_cut) return theta[i];
  throw std::runtime_error("pencil: no nonzero eigenvalue found");
}

}  // namespace bstokes
