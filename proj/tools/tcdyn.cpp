#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "tcdyn/error.hpp"
#include "tcdyn/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Taylor-Couette dynamo simulator"};
  app.require_subcommand(1);
  std::string config_path, resume, out;
  int workers = 0;
  long long seed = -1;
  app.add_option("--config", config_path, "configuration file (key = value with [sections])")->check(CLI::ExistingFile);
  app.add_option("--resume", resume, "checkpoint to resume a nonlinear run from; for sweeps, reuse finished points");
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "parallel sweep points")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  const std::pair<const char*, const char*> subs[] = {
      {"hydro", "steady axisymmetric flow and its statistics"},
      {"kinematic", "growth rate and drift period of one azimuthal mode"},
      {"sweep", "growth rates over the epsilon and Rm lists"},
      {"threshold", "critical Rm by bracketing"},
      {"nonlinear", "coupled run with energy, modal, probe and dipole series"},
      {"postproc", "SVG plots from the CSVs of an output directory"}};
  for (const auto& [name, what] : subs) app.add_subcommand(name, what)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tcdyn::kExitConfig;
  }

  tcdyn::RunConfig cfg;
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    cfg = tcdyn::parse_config(text);
    const std::string sub = app.get_subcommands().front()->get_name();
    for (auto k : {tcdyn::RunKind::Hydro, tcdyn::RunKind::Kinematic, tcdyn::RunKind::Sweep, tcdyn::RunKind::Threshold,
                   tcdyn::RunKind::Nonlinear, tcdyn::RunKind::Postproc}) {
      if (sub == tcdyn::to_string(k)) cfg.kind = k;
    }
    if (!out.empty()) cfg.out_dir = out;
    if (workers > 0) cfg.workers = workers;
    if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
    if (!resume.empty()) cfg.resume = resume;
    cfg.validate();
  } catch (const tcdyn::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return tcdyn::kExitConfig;
  }
  return tcdyn::run(cfg, std::cerr);
}
