#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kg/runner.hpp"

namespace {

int run_command(kg::Command command, const std::string& config_path,
                const std::string& out_dir, bool strict, int threads) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file " << config_path << '\n';
    return kg::exit_config_error;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  kg::ExperimentConfig cfg;
  try {
    cfg = kg::parse_config(buf.str());
  } catch (const kg::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kg::exit_config_error;
  }
  cfg.command = command;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (strict) cfg.strict = true;
  if (threads > 0) cfg.threads = threads;
  return kg::run(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for damped radial Klein-Gordon dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool strict = false;
  int threads = 0;
  app.add_option("--config", config_path, "experiment config file")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_flag("--strict", strict,
               "exit nonzero when a classification is UNDECIDED");
  app.add_option("--threads", threads, "worker threads for sweeps");

  struct Sub {
    const char* name;
    const char* desc;
    kg::Command command;
  };
  const Sub subs[] = {
      {"stationary", "solve for a radial equilibrium profile",
       kg::Command::stationary},
      {"spectrum", "linearized spectrum around an equilibrium",
       kg::Command::spectrum},
      {"evolve", "time-step the damped wave dynamics", kg::Command::evolve},
      {"classify", "run and classify one trajectory", kg::Command::classify},
      {"sweep", "classify a family of scaled initial data",
       kg::Command::sweep},
      {"gapcheck", "spectral gap condition arithmetic", kg::Command::gapcheck},
  };
  for (const Sub& s : subs) app.add_subcommand(s.name, s.desc);

  CLI11_PARSE(app, argc, argv);

  for (const Sub& s : subs)
    if (app.got_subcommand(s.name))
      return run_command(s.command, config_path, out_dir, strict, threads);
  return kg::exit_config_error;
}
