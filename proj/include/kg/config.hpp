#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kg/nonlinearity.hpp"

namespace kg {

/// Parse / validation failure. `problems` lists every violation found, not
/// just the first; `line` is set for tokenizer-level errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string msg, std::vector<std::string> problems = {},
              int line = 0);
  const std::vector<std::string>& problems() const { return problems_; }
  int line() const { return line_; }

 private:
  std::vector<std::string> problems_;
  int line_ = 0;
};

enum class Command { stationary, spectrum, evolve, classify, sweep, gapcheck };

std::string command_name(Command c);

/// Fully validated experiment description. Parsed from a flat key = value
/// document with dotted section prefixes (model.*, dynamics.*, output.*,
/// sweep.*, gap.*); '#' starts a comment; unknown keys are rejected.
struct ExperimentConfig {
  Command command = Command::evolve;

  // model.*
  int d = 1;
  double R = 30.0;
  int N = 1024;
  double theta = 3.0;                 // model.theta (pure power), or
  std::vector<PowerTerm> attract;     // model.attract = coeff:exp,coeff:exp,...
  std::vector<PowerTerm> repel;       // model.repel
  double gamma = -1.0;                // model.gamma; < 0 means (theta-1)/2
  int ell = 0;                        // model.ell (node count, stationary/spectrum)

  // dynamics.*
  double alpha = 0.5;
  double dt = 0.01;
  double T = 40.0;
  double norm_cap = 1e6;
  double conv_tol = 1e-3;
  double delta_coeff = 1e-3;
  int k0_window = 50;
  int max_ell = 2;  // catalog depth for classify/sweep

  // init.* (evolve/classify/sweep): scale * (ell-node profile), or "zero"
  double init_scale = 1.0;
  int init_ell = 0;
  bool init_zero = false;
  double init_vscale = 0.0;  // same-profile velocity component

  // sweep.*: amplitude grid applied to the init profile, one classify job each
  std::vector<double> sweep_scales;

  // gap.*
  double gap_C1 = 1.0, gap_C2 = 1.0;
  double gap_beta1 = 2.0, gap_beta2 = 0.0;
  double gap_lipR = 0.0;

  // output.*
  std::string out_dir = ".";
  int record_every = 10;
  std::string basename = "run";

  long long seed = 0;
  bool strict = false;  // also settable via --strict
  int threads = 1;      // also settable via --threads

  NonlinearitySpec nonlinearity() const;
};

ExperimentConfig parse_config(const std::string& text);

/// FNV-1a 64-bit hash of the canonical serialization; stamped on every
/// output row for provenance.
std::string config_hash(const ExperimentConfig& cfg);
std::string canonical_serialization(const ExperimentConfig& cfg);

}  // namespace kg
