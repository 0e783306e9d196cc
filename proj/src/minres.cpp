#include "bstokes/minres.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace bstokes {

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

// Preconditioned MINRES (Paige-Saunders recurrence). The Lanczos vectors are
// generated for the operator P^{1/2} A P^{1/2} without forming P^{1/2}; |eta|
// tracks the preconditioned residual norm and is monotonically non-increasing.
std::pair<Eigen::VectorXd, SolveReport> minres(const LinOp& apply_a, const LinOp& apply_p,
                                               const Eigen::VectorXd& b,
                                               const Eigen::VectorXd& x0, double rtol,
                                               int maxit) {
  using Vec = Eigen::VectorXd;
  const int n = static_cast<int>(b.size());
  SolveReport rep;
  Vec x = x0;

  // residuals below representable precision are recorded as DBL_MIN so that
  // downstream ratio checks stay well-defined
  auto record = [&rep](double r) {
    rep.residual_history.push_back(r > 0.0 ? r : std::numeric_limits<double>::min());
  };

  Vec v = b - apply_a(x);
  Vec z = apply_p(v);
  double beta_sq = z.dot(v);
  if (!(beta_sq >= 0.0) || !std::isfinite(beta_sq)) {
    record(0.0);
    rep.converged = false;
    rep.stop_reason = StopReason::Breakdown;
    return {x, rep};
  }
  double beta = std::sqrt(beta_sq);
  const double goal = rtol * beta;
  double eta = beta;
  record(eta);
  if (beta == 0.0) {  // x0 already solves the system
    rep.converged = true;
    rep.stop_reason = StopReason::Tol;
    return {x, rep};
  }

  Vec v_prev = Vec::Zero(n);
  Vec w0 = Vec::Zero(n), w1 = Vec::Zero(n);
  double gamma0 = 1.0, gamma1 = 1.0, sigma0 = 0.0, sigma1 = 0.0;

  for (int it = 1; it <= maxit; ++it) {
    v /= beta;
    z /= beta;

    Vec q = apply_a(z);
    const double alpha = z.dot(q);
    if (it > 1) q -= beta * v_prev;
    q -= alpha * v;
    v_prev.swap(v);
    v = q;

    Vec z_next = apply_p(v);
    double beta_next_sq = z_next.dot(v);
    if (!(beta_next_sq >= -1e-14 * beta_sq) || !std::isfinite(beta_next_sq)) {
      rep.iterations = it;
      rep.converged = false;
      rep.stop_reason = StopReason::Breakdown;
      return {x, rep};
    }
    double beta_next = std::sqrt(std::max(beta_next_sq, 0.0));

    const double delta = gamma1 * alpha - gamma0 * sigma1 * beta;
    const double rho1 = std::hypot(delta, beta_next);
    const double rho2 = sigma1 * alpha + gamma0 * gamma1 * beta;
    const double rho3 = sigma0 * beta;
    if (rho1 == 0.0) {
      rep.iterations = it;
      rep.converged = false;
      rep.stop_reason = StopReason::Breakdown;
      return {x, rep};
    }

    Vec w_new = (z - rho2 * w1 - rho3 * w0) / rho1;
    w0.swap(w1);
    w1 = w_new;

    gamma0 = gamma1;
    gamma1 = delta / rho1;
    x += (gamma1 * eta) * w1;

    sigma0 = sigma1;
    sigma1 = beta_next / rho1;
    eta = -sigma1 * eta;
    record(std::abs(eta));

    rep.iterations = it;
    if (std::abs(eta) <= goal) {
      rep.converged = true;
      rep.stop_reason = StopReason::Tol;
      return {x, rep};
    }
    if (beta_next == 0.0) {  // Krylov space exhausted without reaching the goal
      rep.converged = false;
      rep.stop_reason = StopReason::Breakdown;
      return {x, rep};
    }
    beta = beta_next;
    beta_sq = beta_next_sq;
    z.swap(z_next);
  }
  rep.converged = false;
  rep.stop_reason = StopReason::MaxIt;
  return {x, rep};
}

}  // namespace bstokes
