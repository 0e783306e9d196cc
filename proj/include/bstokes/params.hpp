#pragma once

#include <Eigen/Core>
#include <map>
#include <string>

namespace bstokes {

// Physical coefficients of the coupled problem. A single backward-Euler step
// with unit time step is hard-wired (dt stays 1).
struct Params {
  double mu_f = 1.0;    // fluid viscosity
  double mu_s = 1.0;    // second Lame constant
  double lambda = 1.0;  // first Lame constant
  double alpha = 1.0;   // Biot-Willis coefficient
  double C0 = 0.0;      // storage capacity
  double kappa = 1.0;   // scalar permeability
  double gamma = 1.0;   // slip-rate coefficient
  double rho_f = 1.0;
  double rho_s = 1.0;
  Eigen::Vector2d g{0.0, 0.0};  // gravity
  double dt = 1.0;

  double tangential_coeff() const;  // gamma * mu_f / sqrt(kappa)
  double storage_coeff() const;     // C0 + alpha^2 / lambda
  double inv_mu_weight() const;     // 1/(2 mu_s) + 1/(2 mu_f)
  void check() const;               // throws on out-of-range coefficients
};

Params params_from_map(const std::map<std::string, std::string>& kv);
Params load_params(const std::string& path);  // key = value lines, '#' comments

}  // namespace bstokes
