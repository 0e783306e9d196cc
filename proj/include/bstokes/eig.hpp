#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bstokes {

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
};

// K u = lambda M u with M SPD, solved by Cholesky reduction of M and a dense
// symmetric eigensolver; throws std::invalid_argument when M is not SPD.
EigResult generalized_sym_eig(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M);

// max|lambda| / min|lambda| over the pencil A x = lambda B x with B SPD,
// computed densely. Guarded against systems larger than `guard` rows.
double spectral_condition_number(const Eigen::SparseMatrix<double>& A,
                                 const Eigen::SparseMatrix<double>& B, int guard = 8000);

// Smallest generalized eigenvalue of the PSD pencil S q = theta N q restricted
// to the quotient by ker(N): kernel directions of N are projected out of S via
// a pseudo-inverse Schur complement and eigenvalues below rel_cut * max are
// discarded as zero modes. Used for inf-sup constants in seminorms.
double smallest_nonzero_pencil_eigenvalue(const Eigen::MatrixXd& S, const Eigen::MatrixXd& N,
                                          double rel_cut = 1e-10);

}  // namespace bstokes
