#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "bstokes/studies.hpp"
#include "bstokes/version.hpp"

using namespace bstokes;

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  std::string levels;
  std::int64_t seed = -1;
  double rtol = -1.0;
  int maxit = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config, "configuration file (key = value lines)");
  cmd->add_option("--out", opts.out, "output CSV path (default: <study>.csv)");
  cmd->add_option("--levels", opts.levels, "comma-separated refinement levels (log2 1/h)");
  cmd->add_option("--seed", opts.seed, "PRNG seed for solver initial vectors");
  cmd->add_option("--rtol", opts.rtol, "MinRes relative tolerance");
  cmd->add_option("--maxit", opts.maxit, "MinRes iteration cap");
}

int run(Study study, const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config.empty() ? default_config(study) : load_config(opts.config);
  cfg.study = study;
  if (!opts.levels.empty()) {
    cfg.levels.clear();
    std::stringstream ss(opts.levels);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.levels.push_back(std::stoi(item));
  }
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.rtol > 0.0) cfg.rtol = opts.rtol;
  if (opts.maxit > 0) cfg.maxit = opts.maxit;
  if (!opts.out.empty()) cfg.out = opts.out;
  if (cfg.out.empty()) cfg.out = std::string(to_string(study)) + ".csv";

  std::string csv = run_study(cfg);
  std::ofstream out(cfg.out);
  if (!out) {
    std::cerr << "cannot open output file " << cfg.out << "\n";
    return 1;
  }
  out << csv;
  std::cout << "wrote " << cfg.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biot-Stokes interface solver and experiment harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::map<std::string, Study> cmds = {
      {"convergence", Study::Convergence}, {"naive", Study::NaiveCompare},
      {"bc-study", Study::BcStudy},        {"sweep", Study::Sweep},
      {"diag-compare", Study::DiagCompare}, {"enclosed", Study::Enclosed},
  };
  std::map<std::string, CommonOpts> opts;
  for (auto& [name, study] : cmds) {
    CLI::App* cmd = app.add_subcommand(name, std::string("run the ") + name + " study");
    add_common(cmd, opts[name]);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, study] : cmds) {
    if (app.got_subcommand(name)) {
      try {
        return run(study, opts[name]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
  }
  return 1;
}
