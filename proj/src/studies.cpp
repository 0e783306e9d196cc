#include "bstokes/studies.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bstokes/eig.hpp"
#include "bstokes/minres.hpp"
#include "bstokes/mms.hpp"
#include "bstokes/version.hpp"

namespace bstokes {

const char* to_string(Study s) {
  switch (s) {
    case Study::Convergence: return "convergence";
    case Study::NaiveCompare: return "naive";
    case Study::BcStudy: return "bc-study";
    case Study::Sweep: return "sweep";
    case Study::DiagCompare: return "diag-compare";
    case Study::Enclosed: return "enclosed";
  }
  return "?";
}

Study study_from_string(const std::string& name) {
  for (Study s : {Study::Convergence, Study::NaiveCompare, Study::BcStudy, Study::Sweep,
                  Study::DiagCompare, Study::Enclosed})
    if (name == to_string(s)) return s;
  throw std::invalid_argument("unknown study: " + name);
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

FracBc default_fractional_variant(BcConfig bc) {
  switch (bc) {
    case BcConfig::VelDisp: return FracBc::DirichletStrong;
    case BcConfig::StressPressure: return FracBc::NeumannPlusI;
    case BcConfig::DirichletDagger: return FracBc::DirichletStrong;
  }
  return FracBc::NeumannPlusI;
}

void ExperimentConfig::validate() const {
  if (levels.empty()) throw std::invalid_argument("config: empty level list");
  if (!std::is_sorted(levels.begin(), levels.end()))
    throw std::invalid_argument("config: levels must be ascending");
  if (grid_mu_f.empty() || grid_kappa.empty() || grid_lambda.empty() || grid_alpha.empty() ||
      grid_gamma.empty())
    throw std::invalid_argument("config: empty parameter grid");
  if (preconds.empty()) throw std::invalid_argument("config: empty preconditioner list");
  Params probe = base;
  for (double m : grid_mu_f)
    for (double k : grid_kappa)
      for (double l : grid_lambda)
        for (double a : grid_alpha)
          for (double g : grid_gamma) {
            probe.mu_f = m;
            probe.kappa = k;
            probe.lambda = l;
            probe.alpha = a;
            probe.gamma = g;
            probe.check();
          }
}

ExperimentConfig default_config(Study study) {
  ExperimentConfig cfg;
  cfg.study = study;
  cfg.base = Params{};
  cfg.grid_mu_f = {1.0};
  cfg.grid_kappa = {1.0};
  cfg.grid_lambda = {1.0};
  cfg.grid_alpha = {1.0};
  cfg.grid_gamma = {1.0};
  cfg.preconds = {PrecondKind::RF};
  switch (study) {
    case Study::Convergence:
      cfg.bc = BcConfig::StressPressure;
      cfg.levels = {2, 3, 4, 5};
      break;
    case Study::NaiveCompare:
      cfg.bc = BcConfig::StressPressure;
      cfg.levels = {2, 3, 4, 5};
      cfg.preconds = {PrecondKind::RD, PrecondKind::RC};
      cfg.grid_kappa = {1e-4, 1e-2, 1.0};
      cfg.grid_mu_f = {1e-8, 1e-2, 1.0};
      break;
    case Study::BcStudy:
      cfg.bc = BcConfig::StressPressure;  // the study iterates all configs
      cfg.levels = {2, 3, 4};
      cfg.base.C0 = 0.0;
      cfg.base.kappa = 1e-10;
      break;
    case Study::Sweep:
      cfg.bc = BcConfig::VelDisp;
      cfg.levels = {2, 3, 4};
      cfg.base.C0 = 0.0;
      cfg.grid_mu_f = {1e-8, 1e-4, 1.0};
      cfg.grid_kappa = {1e-8, 1e-4, 1.0};
      cfg.grid_lambda = {1.0, 1e4, 1e12};
      cfg.grid_alpha = {1e-8, 1e-4, 1.0};
      cfg.grid_gamma = {1e-2, 1.0, 1e2};
      break;
    case Study::DiagCompare:
      cfg.bc = BcConfig::StressPressure;
      cfg.levels = {2, 3, 4};
      cfg.base.C0 = 0.0;
      cfg.grid_mu_f = {1e-8, 1e-4, 1.0};
      cfg.grid_kappa = {1e-8, 1e-4, 1.0};
      cfg.grid_lambda = {1.0, 1e4, 1e12};
      cfg.grid_alpha = {1e-8, 1e-4, 1.0};
      cfg.preconds = {PrecondKind::RF, PrecondKind::RFDiag};
      break;
    case Study::Enclosed:
      cfg.levels = {0, 1, 2, 3};  // refinements of the base disk mesh
      cfg.base.kappa = 1e-4;
      cfg.preconds = {PrecondKind::RF, PrecondKind::RD, PrecondKind::RC};
      break;
  }
  return cfg;
}

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string metadata(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# " << kVersion << "\n";
  os << "# study=" << to_string(cfg.study) << " bc=" << to_string(cfg.bc) << "\n";
  os << "# seed=" << cfg.seed << " rtol=" << fmt_sci(cfg.rtol) << " maxit=" << cfg.maxit << "\n";
  return os.str();
}

struct Discretization {
  Mesh mesh;
  Spaces spaces;
  std::shared_ptr<const KernelCache> cache;
  TraceSpace trace;
  SpMat unit_lift;  // lifted fractional operator at unit weight
  double h = 0.0;
};

// The fractional operator is linear in its weight, so one unit-weight build
// per (mesh, variant) serves the whole parameter grid.
Discretization make_level(int level, BcConfig bc, FracBc variant, bool with_fractional) {
  Discretization d;
  d.mesh = build_split_square(1 << level, bc);
  d.h = 1.0 / double(1 << level);
  d.spaces = build_spaces(d.mesh);
  d.cache = std::make_shared<const KernelCache>(build_kernel_cache(d.mesh, d.spaces));
  if (with_fractional) {
    d.trace = build_trace_space(d.mesh, d.spaces[4]);
    FractionalOperator frac = build_fractional(d.trace, 1.0, variant);
    d.unit_lift = lift_to_pressure_block(frac, d.trace);
  }
  return d;
}

struct CellSolve {
  int iterations = 0;
  bool converged = false;
};

CellSolve spectral_probe(const SpMat& a, const Preconditioner& prec, const ExperimentConfig& cfg) {
  // Zero right-hand side with a seeded random start: the MinRes trajectory
  // then reflects the preconditioned spectrum alone and is reproducible.
  Vec b = Vec::Zero(a.rows());
  Vec x0 = random_vector(static_cast<int>(a.rows()), cfg.seed);
  auto apply_a = [&a](const Vec& x) { return Vec(a * x); };
  auto [x, rep] = minres(apply_a, prec.op(), b, x0, cfg.rtol, cfg.maxit);
  return {rep.iterations, rep.converged};
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
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
  auto it = kv.find("study");
  if (it == kv.end()) throw std::runtime_error("load_config: missing 'study' key");
  ExperimentConfig cfg = default_config(study_from_string(it->second));
  std::map<std::string, std::string> param_kv;
  for (const auto& [key, val] : kv) {
    if (key == "study") continue;
    else if (key == "bc") {
      if (val == "vel-disp" || val == "vel_disp") cfg.bc = BcConfig::VelDisp;
      else if (val == "stress-pressure" || val == "stress_pressure") cfg.bc = BcConfig::StressPressure;
      else if (val == "dirichlet-dagger" || val == "dirichlet_dagger") cfg.bc = BcConfig::DirichletDagger;
      else throw std::runtime_error("load_config: bad bc " + val);
    } else if (key == "levels") {
      cfg.levels.clear();
      for (double v : parse_list(val)) cfg.levels.push_back(static_cast<int>(v));
    } else if (key == "preconds") {
      cfg.preconds.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.preconds.push_back(precond_from_string(item));
    } else if (key == "grid_mu_f") cfg.grid_mu_f = parse_list(val);
    else if (key == "grid_kappa") cfg.grid_kappa = parse_list(val);
    else if (key == "grid_lambda") cfg.grid_lambda = parse_list(val);
    else if (key == "grid_alpha") cfg.grid_alpha = parse_list(val);
    else if (key == "grid_gamma") cfg.grid_gamma = parse_list(val);
    else if (key == "rtol") cfg.rtol = std::stod(val);
    else if (key == "maxit") cfg.maxit = std::stoi(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "enclosed_n") cfg.enclosed_n = std::stoi(val);
    else if (key == "out") cfg.out = val;
    else param_kv[key] = val;  // falls through to the Params fields
  }
  if (!param_kv.empty()) {
    Params p = params_from_map(param_kv);
    // params_from_map starts from defaults; merge only the provided keys
    Params merged = cfg.base;
    for (const auto& [key, val] : param_kv) {
      (void)val;
      if (key == "mu_f") merged.mu_f = p.mu_f;
      else if (key == "mu_s") merged.mu_s = p.mu_s;
      else if (key == "lambda") merged.lambda = p.lambda;
      else if (key == "alpha") merged.alpha = p.alpha;
      else if (key == "C0") merged.C0 = p.C0;
      else if (key == "kappa") merged.kappa = p.kappa;
      else if (key == "gamma") merged.gamma = p.gamma;
      else if (key == "rho_f") merged.rho_f = p.rho_f;
      else if (key == "rho_s") merged.rho_s = p.rho_s;
      else if (key == "gx") merged.g.x() = p.g.x();
      else if (key == "gy") merged.g.y() = p.g.y();
      else if (key == "dt") merged.dt = p.dt;
    }
    cfg.base = merged;
  }
  return cfg;
}

std::string run_convergence(const ExperimentConfig& cfg) {
  cfg.base.check();
  std::ostringstream os;
  os << metadata(cfg);
  os << "h,e_u_h1,e_pf_l2,e_d_h1,e_phi_l2,e_pp_h1,rate_u,rate_pf,rate_d,rate_phi,rate_pp\n";

  Mesh mesh = build_split_square(1 << cfg.levels.front(), cfg.bc);
  MmsErrors prev;
  for (size_t li = 0; li < cfg.levels.size(); ++li) {
    if (li > 0) {
      for (int step = 0; step < cfg.levels[li] - cfg.levels[li - 1]; ++step)
        mesh = refine_uniform(mesh);
    }
    Spaces sp = build_spaces(mesh);
    set_mms_dirichlet(sp, cfg.base);
    BlockOperator op = assemble_blocks(mesh, sp, cfg.base);
    op.rhs = assemble_mms_load(mesh, sp, cfg.base);
    apply_dirichlet(op);

    SpMat a = op.monolithic();
    Eigen::SparseLU<SpMat> lu(a);
    if (lu.info() != Eigen::Success) throw std::runtime_error("convergence: direct solve failed");
    Vec x = lu.solve(op.monolithic_rhs());
    MmsErrors err = mms_errors(op, x, cfg.base);

    const double h = 1.0 / double(1 << cfg.levels[li]);
    os << fmt_sci(h) << ',' << fmt_sci(err.u_h1) << ',' << fmt_sci(err.pf_l2) << ','
       << fmt_sci(err.d_h1) << ',' << fmt_sci(err.phi_l2) << ',' << fmt_sci(err.pp_h1);
    if (li == 0) {
      os << ",-,-,-,-,-\n";
    } else {
      auto rate = [](double coarse, double fine) { return std::log2(coarse / fine); };
      os << ',' << fmt_sci(rate(prev.u_h1, err.u_h1)) << ',' << fmt_sci(rate(prev.pf_l2, err.pf_l2))
         << ',' << fmt_sci(rate(prev.d_h1, err.d_h1)) << ','
         << fmt_sci(rate(prev.phi_l2, err.phi_l2)) << ',' << fmt_sci(rate(prev.pp_h1, err.pp_h1))
         << "\n";
    }
    prev = err;
  }
  return os.str();
}

std::string run_naive_compare(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << metadata(cfg);
  os << "mu_f,kappa,h,precond,iterations,converged\n";

  std::vector<Discretization> levels;
  for (int l : cfg.levels)
    levels.push_back(make_level(l, cfg.bc, FracBc::NeumannPlusI, false));

  // Table rows: mu_f = 1 with kappa swept, then kappa = 1 with mu_f swept.
  std::vector<std::pair<double, double>> rows;
  for (double k : cfg.grid_kappa) rows.emplace_back(1.0, k);
  for (double m : cfg.grid_mu_f) rows.emplace_back(m, 1.0);

  for (auto [mu_f, kappa] : rows) {
    for (size_t li = 0; li < levels.size(); ++li) {
      Params p = cfg.base;
      p.mu_f = mu_f;
      p.kappa = kappa;
      BlockOperator sys = assemble_blocks(levels[li].mesh, levels[li].spaces, p, levels[li].cache);
      apply_dirichlet(sys);
      SpMat a = sys.monolithic();
      for (PrecondKind kind : cfg.preconds) {
        Preconditioner prec = build_preconditioner(kind, sys, p);
        CellSolve r = spectral_probe(a, prec, cfg);
        os << fmt_sci(mu_f) << ',' << fmt_sci(kappa) << ','
           << fmt_sci(1.0 / double(1 << cfg.levels[li])) << ',' << to_string(kind) << ','
           << r.iterations << ',' << (r.converged ? 1 : 0) << "\n";
      }
    }
  }
  return os.str();
}

std::string run_bc_study(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << metadata(cfg);
  os << "bc_config,fractional_variant,h,cond\n";

  const std::vector<std::pair<BcConfig, FracBc>> setups = {
      {BcConfig::StressPressure, FracBc::DirichletStrong},
      {BcConfig::StressPressure, FracBc::NeumannPlusI},
      {BcConfig::VelDisp, FracBc::DirichletStrong},
      {BcConfig::VelDisp, FracBc::DirichletNitsche},
      {BcConfig::VelDisp, FracBc::NeumannPlusI},
      {BcConfig::DirichletDagger, FracBc::DirichletStrong},
  };

  for (auto [bc, variant] : setups) {
    for (int level : cfg.levels) {
      Discretization d = make_level(level, bc, variant, true);
      Params p = cfg.base;
      BlockOperator sys = assemble_blocks(d.mesh, d.spaces, p, d.cache);
      apply_dirichlet(sys);
      SpMat lift = SpMat(p.inv_mu_weight() * d.unit_lift);
      Preconditioner prec = build_rf(sys, p, lift);
      double cond = spectral_condition_number(sys.monolithic(), prec.matrix());
      os << to_string(bc) << ',' << to_string(variant) << ',' << fmt_sci(1.0 / double(1 << level))
         << ',' << fmt_sci(cond) << "\n";
    }
  }
  return os.str();
}

namespace {

// The sweep explores the alpha slice at gamma = 1 plus the gamma slice at
// alpha = 1, without duplicating the shared cell.
std::vector<std::pair<double, double>> alpha_gamma_cells(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> cells;
  for (double a : cfg.grid_alpha) cells.emplace_back(a, 1.0);
  for (double g : cfg.grid_gamma)
    if (g != 1.0) cells.emplace_back(1.0, g);
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace

std::string run_sweep(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << metadata(cfg);
  os << "mu_f,kappa,lambda,alpha,gamma,h,precond,iterations\n";

  const FracBc variant = default_fractional_variant(cfg.bc);
  std::vector<Discretization> levels;
  for (int l : cfg.levels) levels.push_back(make_level(l, cfg.bc, variant, true));

  auto ag = alpha_gamma_cells(cfg);
  for (double mu_f : cfg.grid_mu_f) {
    for (double kappa : cfg.grid_kappa) {
      for (double lambda : cfg.grid_lambda) {
        for (auto [alpha, gamma] : ag) {
          for (size_t li = 0; li < levels.size(); ++li) {
            Params p = cfg.base;
            p.mu_f = mu_f;
            p.kappa = kappa;
            p.lambda = lambda;
            p.alpha = alpha;
            p.gamma = gamma;
            BlockOperator sys =
                assemble_blocks(levels[li].mesh, levels[li].spaces, p, levels[li].cache);
            apply_dirichlet(sys);
            SpMat lift = SpMat(p.inv_mu_weight() * levels[li].unit_lift);
            SpMat a = sys.monolithic();
            for (PrecondKind kind : cfg.preconds) {
              Preconditioner prec = build_preconditioner(kind, sys, p, &lift);
              CellSolve r = spectral_probe(a, prec, cfg);
              os << fmt_sci(mu_f) << ',' << fmt_sci(kappa) << ',' << fmt_sci(lambda) << ','
                 << fmt_sci(alpha) << ',' << fmt_sci(gamma) << ','
                 << fmt_sci(1.0 / double(1 << cfg.levels[li])) << ',' << to_string(kind) << ','
                 << r.iterations << "\n";
            }
          }
        }
      }
    }
  }
  return os.str();
}

std::string run_diag_compare(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << metadata(cfg);
  os << "mu_f,kappa,lambda,alpha,gamma,h,precond,iterations,flagged\n";

  const FracBc variant = default_fractional_variant(cfg.bc);
  std::vector<Discretization> levels;
  for (int l : cfg.levels) levels.push_back(make_level(l, cfg.bc, variant, true));

  for (double mu_f : cfg.grid_mu_f) {
    for (double kappa : cfg.grid_kappa) {
      for (double lambda : cfg.grid_lambda) {
        for (double alpha : cfg.grid_alpha) {
          for (size_t li = 0; li < levels.size(); ++li) {
            Params p = cfg.base;
            p.mu_f = mu_f;
            p.kappa = kappa;
            p.lambda = lambda;
            p.alpha = alpha;
            BlockOperator sys =
                assemble_blocks(levels[li].mesh, levels[li].spaces, p, levels[li].cache);
            apply_dirichlet(sys);
            SpMat lift = SpMat(p.inv_mu_weight() * levels[li].unit_lift);
            SpMat a = sys.monolithic();
            Preconditioner rf = build_rf(sys, p, lift);
            Preconditioner rfd = build_rf_diag(sys, p, lift);
            CellSolve r1 = spectral_probe(a, rf, cfg);
            CellSolve r2 = spectral_probe(a, rfd, cfg);
            int flagged = std::abs(r1.iterations - r2.iterations) > 10 ? 1 : 0;
            auto row = [&](PrecondKind kind, const CellSolve& r) {
              os << fmt_sci(mu_f) << ',' << fmt_sci(kappa) << ',' << fmt_sci(lambda) << ','
                 << fmt_sci(alpha) << ',' << fmt_sci(1.0) << ','
                 << fmt_sci(1.0 / double(1 << cfg.levels[li])) << ',' << to_string(kind) << ','
                 << r.iterations << ',' << flagged << "\n";
            };
            row(PrecondKind::RF, r1);
            row(PrecondKind::RFDiag, r2);
          }
        }
      }
    }
  }
  return os.str();
}

std::string run_enclosed(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << metadata(cfg);
  os << "h,dofs,trace_dofs,iters_rf,iters_rd,iters_rc\n";

  Mesh mesh = build_enclosed_disk(cfg.enclosed_n);
  for (size_t li = 0; li < cfg.levels.size(); ++li) {
    if (li > 0)
      for (int step = 0; step < cfg.levels[li] - cfg.levels[li - 1]; ++step)
        mesh = refine_uniform(mesh);
    Spaces sp = build_spaces(mesh);
    auto cache = std::make_shared<const KernelCache>(build_kernel_cache(mesh, sp));
    Params p = cfg.base;

    BlockOperator sys = assemble_blocks(mesh, sp, p, cache);
    LoadData load;
    // Compressive traction on the +x arc drives the flow; the -x arc stays a
    // natural (zero traction) outlet.
    load.traction = [](const Eigen::Vector2d& x, int comp) {
      if (x.x() > 1.0 - 1e-9) return comp == 0 ? -1.0 : 0.0;
      return 0.0;
    };
    sys.rhs = assemble_load(mesh, sp, p, load);
    apply_dirichlet(sys);

    TraceSpace trace = build_trace_space(mesh, sp[4]);
    FractionalOperator frac = build_fractional(trace, p.inv_mu_weight(), FracBc::NeumannPlusI);
    SpMat lift = lift_to_pressure_block(frac, trace);

    SpMat a = sys.monolithic();
    Vec b = sys.monolithic_rhs();
    Vec x0 = Vec::Zero(a.rows());
    auto apply_a = [&a](const Vec& x) { return Vec(a * x); };
    auto solve_with = [&](const Preconditioner& prec) {
      auto [x, rep] = minres(apply_a, prec.op(), b, x0, cfg.rtol, cfg.maxit);
      return rep.iterations;
    };
    int it_rf = solve_with(build_rf(sys, p, lift));
    int it_rd = solve_with(build_rd(sys, p));
    int it_rc = solve_with(build_rc(sys, p));

    double h = 0.0;
    for (int f = 0; f < mesh.num_facets(); ++f) h = std::max(h, mesh.facet_length(f));
    os << fmt_sci(h) << ',' << total_dim(sp) << ',' << trace.dim() << ',' << it_rf << ','
       << it_rd << ',' << it_rc << "\n";
  }
  return os.str();
}

std::string run_study(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.study) {
    case Study::Convergence: return run_convergence(cfg);
    case Study::NaiveCompare: return run_naive_compare(cfg);
    case Study::BcStudy: return run_bc_study(cfg);
    case Study::Sweep: return run_sweep(cfg);
    case Study::DiagCompare: return run_diag_compare(cfg);
    case Study::Enclosed: return run_enclosed(cfg);
  }
  throw std::invalid_argument("run_study: bad study");
}

}  // namespace bstokes
