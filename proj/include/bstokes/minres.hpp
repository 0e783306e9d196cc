#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

namespace bstokes {

enum class StopReason : int { Tol = 0, MaxIt = 1, Breakdown = 2 };

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // preconditioned norms, initial included
  bool converged = false;
  StopReason stop_reason = StopReason::Tol;

  double initial_residual() const { return residual_history.front(); }
  double final_residual() const { return residual_history.back(); }
};

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Preconditioned minimal-residual iteration for a symmetric operator with an
// SPD preconditioner; convergence is measured on the reduction of
// sqrt(r' P r) relative to the initial residual.
std::pair<Eigen::VectorXd, SolveReport> minres(const LinOp& apply_a, const LinOp& apply_p,
                                               const Eigen::VectorXd& b,
                                               const Eigen::VectorXd& x0, double rtol = 1e-8,
                                               int maxit = 750);

// Uniform [-1,1) entries from a fixed-seed generator, for reproducible
// initial vectors.
Eigen::VectorXd random_vector(int n, std::uint64_t seed);

}  // namespace bstokes
