#include "kg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace kg {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

ConfigError::ConfigError(std::string msg, std::vector<std::string> problems,
                         int line)
    : std::runtime_error(std::move(msg)),
      problems_(std::move(problems)),
      line_(line) {}

std::string command_name(Command c) {
  switch (c) {
    case Command::stationary: return "stationary";
    case Command::spectrum: return "spectrum";
    case Command::evolve: return "evolve";
    case Command::classify: return "classify";
    case Command::sweep: return "sweep";
    case Command::gapcheck: return "gapcheck";
  }
  return "?";
}

NonlinearitySpec ExperimentConfig::nonlinearity() const {
  if (!attract.empty() || !repel.empty()) {
    const double g = gamma > 0.0 ? gamma : 0.5 * (theta - 1.0);
    return NonlinearitySpec::make(attract, repel, g, d);
  }
  if (gamma > 0.0)
    return NonlinearitySpec::make({{1.0, theta}}, {}, gamma, d);
  return NonlinearitySpec::pure_power(theta, d);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_sweep_scales = false;

  auto parse_terms = [&](const std::string& val, const std::string& key) {
    std::vector<PowerTerm> terms;
    for (const auto& item : split(val, ',')) {
      if (item.empty()) continue;
      const auto parts = split(item, ':');
      if (parts.size() != 2) {
        problems.push_back(key + ": expected coeff:exponent pairs, got '" +
                           item + "'");
        continue;
      }
      try {
        terms.push_back({std::stod(parts[0]), std::stod(parts[1])});
      } catch (const std::exception&) {
        problems.push_back(key + ": non-numeric entry '" + item + "'");
      }
    }
    return terms;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                            ": expected key = value",
                        {}, lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto num = [&](double& target) {
      try {
        target = std::stod(val);
      } catch (const std::exception&) {
        problems.push_back(key + ": not a number: '" + val + "'");
      }
    };
    auto integer = [&](int& target) {
      try {
        target = std::stoi(val);
      } catch (const std::exception&) {
        problems.push_back(key + ": not an integer: '" + val + "'");
      }
    };
    auto boolean = [&](bool& target) {
      if (val == "true" || val == "1")
        target = true;
      else if (val == "false" || val == "0")
        target = false;
      else
        problems.push_back(key + ": not a boolean: '" + val + "'");
    };

    if (key == "command") {
      bool found = false;
      for (Command c : {Command::stationary, Command::spectrum,
                        Command::evolve, Command::classify, Command::sweep,
                        Command::gapcheck})
        if (val == command_name(c)) {
          cfg.command = c;
          found = true;
        }
      if (!found) problems.push_back("command: unknown command '" + val + "'");
    } else if (key == "model.d") {
      integer(cfg.d);
    } else if (key == "model.R") {
      num(cfg.R);
    } else if (key == "model.N") {
      integer(cfg.N);
    } else if (key == "model.theta") {
      num(cfg.theta);
    } else if (key == "model.gamma") {
      num(cfg.gamma);
    } else if (key == "model.ell") {
      integer(cfg.ell);
    } else if (key == "model.attract") {
      cfg.attract = parse_terms(val, key);
    } else if (key == "model.repel") {
      cfg.repel = parse_terms(val, key);
    } else if (key == "dynamics.alpha") {
      num(cfg.alpha);
    } else if (key == "dynamics.dt") {
      num(cfg.dt);
    } else if (key == "dynamics.T") {
      num(cfg.T);
    } else if (key == "dynamics.norm_cap") {
      num(cfg.norm_cap);
    } else if (key == "dynamics.conv_tol") {
      num(cfg.conv_tol);
    } else if (key == "dynamics.delta_coeff") {
      num(cfg.delta_coeff);
    } else if (key == "dynamics.k0_window") {
      integer(cfg.k0_window);
    } else if (key == "dynamics.max_ell") {
      integer(cfg.max_ell);
    } else if (key == "init.scale") {
      num(cfg.init_scale);
    } else if (key == "init.ell") {
      integer(cfg.init_ell);
    } else if (key == "init.zero") {
      boolean(cfg.init_zero);
    } else if (key == "init.vscale") {
      num(cfg.init_vscale);
    } else if (key == "sweep.scales") {
      cfg.sweep_scales.clear();
      for (const auto& item : split(val, ',')) {
        if (item.empty()) continue;
        try {
          cfg.sweep_scales.push_back(std::stod(item));
        } catch (const std::exception&) {
          problems.push_back("sweep.scales: non-numeric entry '" + item + "'");
        }
      }
      have_sweep_scales = !cfg.sweep_scales.empty();
    } else if (key == "gap.C1") {
      num(cfg.gap_C1);
    } else if (key == "gap.C2") {
      num(cfg.gap_C2);
    } else if (key == "gap.beta1") {
      num(cfg.gap_beta1);
    } else if (key == "gap.beta2") {
      num(cfg.gap_beta2);
    } else if (key == "gap.lipR") {
      num(cfg.gap_lipR);
    } else if (key == "output.dir") {
      cfg.out_dir = val;
    } else if (key == "output.record_every") {
      integer(cfg.record_every);
    } else if (key == "output.basename") {
      cfg.basename = val;
    } else if (key == "seed") {
      try {
        cfg.seed = std::stoll(val);
      } catch (const std::exception&) {
        problems.push_back("seed: not an integer: '" + val + "'");
      }
    } else if (key == "strict") {
      boolean(cfg.strict);
    } else if (key == "threads") {
      integer(cfg.threads);
    } else {
      problems.push_back("unknown key '" + key + "' (line " +
                         std::to_string(lineno) + ")");
    }
  }

  // Constraint pass: report everything that is wrong, not just the first hit.
  if (cfg.d < 1 || cfg.d > 6)
    problems.push_back("model.d: must be in the 1-6 range, got " +
                       std::to_string(cfg.d));
  if (!(cfg.R > 0.0)) problems.push_back("model.R: must be positive");
  if (cfg.N < 16) problems.push_back("model.N: must be at least 16");
  if (!(cfg.theta > 1.0)) problems.push_back("model.theta: must exceed 1");
  if (!(cfg.dt > 0.0)) problems.push_back("dynamics.dt: must be positive");
  if (!(cfg.T > 0.0)) problems.push_back("dynamics.T: must be positive");
  if (!(cfg.norm_cap > 0.0))
    problems.push_back("dynamics.norm_cap: must be positive");
  if (!(cfg.conv_tol > 0.0))
    problems.push_back("dynamics.conv_tol: must be positive");
  if (!(cfg.delta_coeff > 0.0))
    problems.push_back("dynamics.delta_coeff: must be positive");
  if (cfg.k0_window < 2)
    problems.push_back("dynamics.k0_window: must be at least 2");
  if (cfg.record_every < 1)
    problems.push_back("output.record_every: must be at least 1");
  if (cfg.threads < 1) problems.push_back("threads: must be at least 1");
  if (cfg.ell < 0) problems.push_back("model.ell: must be >= 0");
  if (cfg.init_ell < 0) problems.push_back("init.ell: must be >= 0");
  if (cfg.max_ell < 0) problems.push_back("dynamics.max_ell: must be >= 0");
  if (cfg.command == Command::sweep && !have_sweep_scales)
    problems.push_back("sweep.scales: required for the sweep command");
  if (cfg.command == Command::gapcheck) {
    if (!(cfg.gap_beta1 > cfg.gap_beta2))
      problems.push_back("gap.beta1: must exceed gap.beta2");
    if (!(cfg.gap_C1 >= 1.0) || !(cfg.gap_C2 >= 1.0))
      problems.push_back("gap.C1/gap.C2: must be >= 1");
    if (!(cfg.gap_lipR >= 0.0)) problems.push_back("gap.lipR: must be >= 0");
  }
  if (cfg.d >= 1 && cfg.d <= 6 && cfg.theta > 1.0) {
    try {
      (void)cfg.nonlinearity();
    } catch (const std::exception& e) {
      problems.push_back(std::string("model nonlinearity: ") + e.what());
    }
  }

  if (!problems.empty()) {
    std::string msg = "config: " + std::to_string(problems.size()) +
                      " problem(s):";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg, problems);
  }
  return cfg;
}

std::string canonical_serialization(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "command=" << command_name(cfg.command) << '\n';
  out << "model.d=" << cfg.d << '\n';
  out << "model.R=" << fmt17(cfg.R) << '\n';
  out << "model.N=" << cfg.N << '\n';
  out << "model.theta=" << fmt17(cfg.theta) << '\n';
  out << "model.gamma=" << fmt17(cfg.gamma) << '\n';
  out << "model.ell=" << cfg.ell << '\n';
  out << "model.attract=";
  for (const auto& t : cfg.attract)
    out << fmt17(t.coeff) << ':' << fmt17(t.exponent) << ',';
  out << '\n';
  out << "model.repel=";
  for (const auto& t : cfg.repel)
    out << fmt17(t.coeff) << ':' << fmt17(t.exponent) << ',';
  out << '\n';
  out << "dynamics.alpha=" << fmt17(cfg.alpha) << '\n';
  out << "dynamics.dt=" << fmt17(cfg.dt) << '\n';
  out << "dynamics.T=" << fmt17(cfg.T) << '\n';
  out << "dynamics.norm_cap=" << fmt17(cfg.norm_cap) << '\n';
  out << "dynamics.conv_tol=" << fmt17(cfg.conv_tol) << '\n';
  out << "dynamics.delta_coeff=" << fmt17(cfg.delta_coeff) << '\n';
  out << "dynamics.k0_window=" << cfg.k0_window << '\n';
  out << "dynamics.max_ell=" << cfg.max_ell << '\n';
  out << "init.scale=" << fmt17(cfg.init_scale) << '\n';
  out << "init.ell=" << cfg.init_ell << '\n';
  out << "init.zero=" << (cfg.init_zero ? 1 : 0) << '\n';
  out << "init.vscale=" << fmt17(cfg.init_vscale) << '\n';
  out << "sweep.scales=";
  for (double s : cfg.sweep_scales) out << fmt17(s) << ',';
  out << '\n';
  out << "gap.C1=" << fmt17(cfg.gap_C1) << '\n';
  out << "gap.C2=" << fmt17(cfg.gap_C2) << '\n';
  out << "gap.beta1=" << fmt17(cfg.gap_beta1) << '\n';
  out << "gap.beta2=" << fmt17(cfg.gap_beta2) << '\n';
  out << "gap.lipR=" << fmt17(cfg.gap_lipR) << '\n';
  out << "output.record_every=" << cfg.record_every << '\n';
  out << "seed=" << cfg.seed << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a, 64 bit.
  const std::string s = canonical_serialization(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace kg
