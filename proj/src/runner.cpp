#include "kg/runner.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>
#include <vector>

#include "kg/dichotomy.hpp"
#include "kg/manifold.hpp"
#include "kg/spectral.hpp"

namespace kg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_or_throw(const fs::path& p) {
  std::ofstream out(p);
  if (!out)
    throw std::runtime_error("runner: cannot open output file " + p.string());
  return out;
}

FieldPair initial_state(const ExperimentConfig& cfg, GridPtr grid,
                        const std::vector<StationaryProfile>& catalog,
                        double scale) {
  FieldPair s = zero_state(grid);
  if (cfg.init_zero) return s;
  const StationaryProfile* base = nullptr;
  for (const auto& p : catalog)
    if (p.nodes == cfg.init_ell) base = &p;
  if (!base)
    throw std::runtime_error(
        "runner: no catalog profile with the requested init.ell node count");
  s.u = scale * base->Q;
  s.v = cfg.init_vscale * base->Q;
  return s;
}

void write_series(const fs::path& p, const Trajectory& traj,
                  const std::string& hash) {
  std::ofstream out = open_or_throw(p);
  out << "t,E,K0,h1_sq,l2v_sq,ydot,linf_u,config_hash\n";
  for (const auto& s : traj.scalars) {
    out << fmt17(s.t) << ',' << fmt17(s.E) << ',' << fmt17(s.K0) << ','
        << fmt17(s.h1_sq) << ',' << fmt17(s.l2v_sq) << ',' << fmt17(s.ydot)
        << ',' << fmt17(s.linf_u) << ',' << hash << '\n';
  }
}

const char* kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::FTB: return "FTB";
    case VerdictKind::CONVERGED: return "CONVERGED";
    case VerdictKind::UNDECIDED: return "UNDECIDED";
  }
  return "?";
}

const char* reason_name(StopReason r) {
  switch (r) {
    case StopReason::horizon: return "horizon";
    case StopReason::norm_cap: return "norm_cap";
    case StopReason::nonfinite: return "nonfinite";
  }
  return "?";
}

json verdict_json(const TrajectoryVerdict& v, int job, double scale,
                  const std::string& hash) {
  json j;
  j["schema"] = "verdict/1";
  j["job"] = job;
  j["scale"] = scale;
  j["kind"] = kind_name(v.kind);
  j["stop_reason"] = reason_name(v.stop_reason);
  if (v.kind == VerdictKind::FTB) {
    j["blowup_lo"] = v.blowup_lo;
    j["blowup_hi"] = v.blowup_hi;
  }
  if (!v.limit_id.empty()) {
    j["limit_id"] = v.limit_id;
    j["limit_distance"] = v.limit_distance;
    j["rate_fit"] = v.rate_fit;
    j["ambiguous"] = v.ambiguous_match;
  }
  j["k0_tail_min"] = v.k0_tail_min;
  j["k0_tail_mean"] = v.k0_tail_mean;
  j["e_start"] = v.e_start;
  j["e_end"] = v.e_end;
  j["min_k0"] = v.min_k0;
  j["max_norm"] = v.max_norm;
  j["solver_suspect"] = v.solver_suspect;
  j["config_hash"] = hash;
  return j;
}

int run_gapcheck(const ExperimentConfig& cfg, std::ostream& log,
                 const std::string& hash) {
  const GapConditionReport rep = gap_condition(cfg.gap_C1, cfg.gap_C2,
                                               cfg.gap_beta1, cfg.gap_beta2,
                                               cfg.gap_lipR);
  std::ofstream out =
      open_or_throw(fs::path(cfg.out_dir) / (cfg.basename + "_gapcheck.txt"));
  out << "config_hash " << hash << '\n';
  out << "C1 " << fmt17(rep.C1) << "\nC2 " << fmt17(rep.C2) << '\n';
  out << "beta1 " << fmt17(rep.beta1) << "\nbeta2 " << fmt17(rep.beta2)
      << '\n';
  out << "lipR " << fmt17(rep.lipR) << '\n';
  out << "condition_value " << fmt17(rep.condition_value) << '\n';
  out << "holds " << (rep.holds ? 1 : 0) << '\n';
  if (rep.holds) {
    out << "gamma1 " << fmt17(rep.gamma1) << '\n';
    out << "gamma2 " << fmt17(rep.gamma2) << '\n';
    out << "lipg_bound " << fmt17(rep.lipg_bound) << '\n';
  }
  log << "gapcheck: condition_value = " << rep.condition_value
      << (rep.holds ? " (holds)" : " (fails)") << '\n';
  return exit_ok;
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  fs::create_directories(cfg.out_dir);
  try {
    if (cfg.command == Command::gapcheck) return run_gapcheck(cfg, log, hash);

    GridPtr grid = build_grid(cfg.d, cfg.R, cfg.N);
    const NonlinearitySpec spec = cfg.nonlinearity();

    if (cfg.command == Command::stationary) {
      const StationaryProfile p = find_stationary(spec, grid, cfg.ell);
      std::ofstream out = open_or_throw(fs::path(cfg.out_dir) /
                                        (cfg.basename + "_stationary.txt"));
      out << "config_hash " << hash << '\n';
      out << "s0 " << fmt17(p.s0) << '\n';
      out << "nodes " << p.nodes << '\n';
      out << "residual " << fmt17(p.residual) << '\n';
      out << "energy " << fmt17(p.energy) << '\n';
      out << "k0 " << fmt17(p.k0) << '\n';
      std::ofstream prof = open_or_throw(fs::path(cfg.out_dir) /
                                         (cfg.basename + "_profile.csv"));
      prof << "r,Q,config_hash\n";
      for (int i = 0; i < grid->N; ++i)
        prof << fmt17(grid->r[i]) << ',' << fmt17(p.Q[i]) << ',' << hash
             << '\n';
      log << "stationary: s0 = " << p.s0 << ", nodes = " << p.nodes << '\n';
      return exit_ok;
    }

    if (cfg.command == Command::spectrum) {
      const StationaryProfile p = find_stationary(spec, grid, cfg.ell);
      const SpectralReport rep = spectral_report(p, spec, cfg.alpha);
      const ManifoldDims dims = manifold_dimensions(rep);
      std::ofstream out = open_or_throw(fs::path(cfg.out_dir) /
                                        (cfg.basename + "_spectrum.txt"));
      out << "config_hash " << hash << '\n';
      out << "alpha " << fmt17(rep.alpha) << '\n';
      out << "mu";
      for (const auto& e : rep.mu) out << ' ' << fmt17(e.mu);
      out << '\n';
      out << "mu_error_estimate";
      for (const auto& e : rep.mu) out << ' ' << fmt17(e.error_estimate);
      out << '\n';
      out << "near_threshold";
      for (double m : rep.near_threshold) out << ' ' << fmt17(m);
      out << '\n';
      out << "kernel "
          << (rep.kernel.flag == KernelFlag::one_dimensional
                  ? "one_dimensional"
                  : "trivial")
          << '\n';
      out << "kernel_defect " << fmt17(rep.kernel.defect) << '\n';
      out << "z";
      for (const auto& z : rep.z)
        out << ' ' << fmt17(z.real()) << (z.imag() >= 0 ? "+" : "")
            << fmt17(z.imag()) << 'i';
      out << '\n';
      out << "essential_re " << fmt17(rep.ess.re) << '\n';
      out << "essential_im_min " << fmt17(rep.ess.im_min) << '\n';
      if (rep.ess.has_interval)
        out << "essential_interval " << fmt17(rep.ess.interval_lo) << ' '
            << fmt17(rep.ess.interval_hi) << '\n';
      out << "n_unstable " << rep.n_unstable << '\n';
      out << "n_center " << rep.n_center << '\n';
      out << "dim_u " << dims.dim_u << '\n';
      out << "dim_c " << dims.dim_c << '\n';
      out << "quad_form " << fmt17(rep.quad_form) << '\n';
      out << "h5f_slack " << fmt17(rep.h5f_slack) << '\n';
      log << "spectrum: " << rep.mu.size() << " eigenvalue(s) below threshold"
          << '\n';
      return exit_ok;
    }

    // The remaining commands all evolve trajectories.
    const std::vector<StationaryProfile> catalog =
        build_catalog(spec, grid, cfg.max_ell);
    SimulationParams params;
    params.alpha = cfg.alpha;
    params.dt = cfg.dt;
    params.T = cfg.T;
    params.blowup_norm_cap = cfg.norm_cap;
    params.record_every = cfg.record_every;
    Thresholds thresholds;
    thresholds.delta_coeff = cfg.delta_coeff;
    thresholds.conv_tol = cfg.conv_tol;
    thresholds.k0_window = cfg.k0_window;
    LinearFlow flow(grid, cfg.alpha);

    if (cfg.command == Command::evolve) {
      const FieldPair s0 = initial_state(cfg, grid, catalog, cfg.init_scale);
      const Trajectory traj = evolve(s0, spec, params, flow);
      write_series(fs::path(cfg.out_dir) / (cfg.basename + "_series.csv"),
                   traj, hash);
      log << "evolve: stopped at t = " << traj.t_end << " ("
          << reason_name(traj.reason) << ")\n";
      return exit_ok;
    }

    if (cfg.command == Command::classify) {
      const FieldPair s0 = initial_state(cfg, grid, catalog, cfg.init_scale);
      const TrajectoryVerdict v =
          classify(s0, spec, params, catalog, thresholds, flow, nullptr);
      std::ofstream out = open_or_throw(fs::path(cfg.out_dir) /
                                        (cfg.basename + "_verdicts.ndjson"));
      out << verdict_json(v, 0, cfg.init_scale, hash).dump() << '\n';
      log << "classify: " << kind_name(v.kind) << '\n';
      if (cfg.strict && v.kind == VerdictKind::UNDECIDED)
        return exit_strict_undecided;
      return exit_ok;
    }

    // sweep: one classify job per amplitude, fanned out across workers,
    // merged in job-index order.
    const int jobs = static_cast<int>(cfg.sweep_scales.size());
    std::vector<TrajectoryVerdict> verdicts(jobs);
    std::vector<std::string> errors(jobs);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          const FieldPair s0 =
              initial_state(cfg, grid, catalog, cfg.sweep_scales[i]);
          verdicts[i] =
              classify(s0, spec, params, catalog, thresholds, flow, nullptr);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    const int nthreads = std::max(1, std::min(cfg.threads, jobs));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (int i = 0; i < jobs; ++i)
      if (!errors[i].empty())
        throw std::runtime_error("sweep job " + std::to_string(i) + ": " +
                                 errors[i]);
    std::ofstream out = open_or_throw(fs::path(cfg.out_dir) /
                                      (cfg.basename + "_verdicts.ndjson"));
    bool any_undecided = false;
    for (int i = 0; i < jobs; ++i) {
      out << verdict_json(verdicts[i], i, cfg.sweep_scales[i], hash).dump()
          << '\n';
      any_undecided |= verdicts[i].kind == VerdictKind::UNDECIDED;
    }
    log << "sweep: " << jobs << " job(s) classified\n";
    if (cfg.strict && any_undecided) return exit_strict_undecided;
    return exit_ok;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_solver_fault;
  }
}

}  // namespace kg
