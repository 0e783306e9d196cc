#include "bstokes/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bstokes {

double Params::tangential_coeff() const { return gamma * mu_f / std::sqrt(kappa); }

double Params::storage_coeff() const { return C0 + alpha * alpha / lambda; }

double Params::inv_mu_weight() const { return 0.5 / mu_s + 0.5 / mu_f; }

void Params::check() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("Params: ") + name + " must be > 0");
  };
  positive(mu_f, "mu_f");
  positive(mu_s, "mu_s");
  positive(kappa, "kappa");
  positive(lambda, "lambda");
  positive(gamma, "gamma");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("Params: alpha must lie in (0, 1]");
  if (!(C0 >= 0.0)) throw std::invalid_argument("Params: C0 must be >= 0");
  if (dt != 1.0) throw std::invalid_argument("Params: only dt = 1 is supported");
}

Params params_from_map(const std::map<std::string, std::string>& kv) {
  Params p;
  auto num = [](const std::string& s) { return std::stod(s); };
  for (const auto& [key, val] : kv) {
    if (key == "mu_f") p.mu_f = num(val);
    else if (key == "mu_s") p.mu_s = num(val);
    else if (key == "lambda") p.lambda = num(val);
    else if (key == "alpha") p.alpha = num(val);
    else if (key == "C0") p.C0 = num(val);
    else if (key == "kappa") p.kappa = num(val);
    else if (key == "gamma") p.gamma = num(val);
    else if (key == "rho_f") p.rho_f = num(val);
    else if (key == "rho_s") p.rho_s = num(val);
    else if (key == "gx") p.g.x() = num(val);
    else if (key == "gy") p.g.y() = num(val);
    else if (key == "dt") p.dt = num(val);
    else throw std::invalid_argument("unknown parameter key: " + key);
  }
  return p;
}

Params load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return params_from_map(kv);
}

}  // namespace bstokes
