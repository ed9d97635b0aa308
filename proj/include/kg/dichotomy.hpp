#pragma once

#include <string>
#include <vector>

#include "kg/propagator.hpp"
#include "kg/stationary.hpp"

namespace kg {

/// Time series of the convexity quantities y = ||u||^2/2 + alpha int ||u||^2,
/// its derivative from the inner-product formula, and the second-derivative
/// identity residual max |y'' - (||v||^2 - K0(u))|.
struct ConvexityDiagnostics {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> ydot;
  std::vector<double> yddot;  // centered differences of ydot (interior samples)
  double yddot_identity_residual = 0.0;
};

ConvexityDiagnostics convexity_diagnostics(const Trajectory& traj,
                                           double alpha);

/// Sample times where |K0| + ||v|| is locally minimal and beats a decreasing
/// envelope; the vanishing sequence of a converging trajectory.
struct VanishingScan {
  std::vector<double> times;
  std::vector<double> minima;
  bool vanishing = false;  // minima decayed below the absolute tolerance
};

VanishingScan k0_vanishing_scan(const Trajectory& traj, double abs_tol = 1e-6);

struct OmegaMatch {
  std::string id;  // "zero", "Q<nodes>[#k]", or "-Q<nodes>[#k]"
  double distance = 0.0;
  bool ambiguous = false;  // runner-up within 2x of the best distance
};

/// Nearest equilibrium (zero and both signs of every catalog profile) to the
/// final recorded state, in the discrete H1 x L2 norm.
OmegaMatch omega_limit_match(const Trajectory& traj,
                             const std::vector<StationaryProfile>& catalog);

enum class VerdictKind { FTB, CONVERGED, UNDECIDED };

struct Thresholds {
  double delta_coeff = 1e-3;  // blow-up margin delta = delta_coeff (1 + |E0|)
  double conv_tol = 1e-3;
  int k0_window = 50;  // trailing sample count for the K0 window
};

struct TrajectoryVerdict {
  VerdictKind kind = VerdictKind::UNDECIDED;
  double blowup_lo = 0.0, blowup_hi = 0.0;  // bracket when FTB
  std::string limit_id;
  double limit_distance = 0.0;
  double rate_fit = 0.0;  // exponential decay exponent of the distance
  double k0_tail_min = 0.0, k0_tail_mean = 0.0;
  double e_start = 0.0, e_end = 0.0;  // continuum-accurate energies
  double min_k0 = 0.0, max_norm = 0.0;
  bool solver_suspect = false;
  bool ambiguous_match = false;
  StopReason stop_reason = StopReason::horizon;
};

/// Runs the flow and applies the trichotomy rules: FTB needs the norm cap
/// (or non-finite values) plus K0/energy evidence; CONVERGED needs terminal
/// proximity to a catalog equilibrium with small velocity; anything else is
/// UNDECIDED with the evidence attached. There is no global-unbounded
/// verdict.
TrajectoryVerdict classify(const FieldPair& state0, const NonlinearitySpec& spec,
                           const SimulationParams& params,
                           const std::vector<StationaryProfile>& catalog,
                           const Thresholds& thresholds);
TrajectoryVerdict classify(const FieldPair& state0, const NonlinearitySpec& spec,
                           const SimulationParams& params,
                           const std::vector<StationaryProfile>& catalog,
                           const Thresholds& thresholds,
                           const LinearFlow& flow, Trajectory* traj_out);

}  // namespace kg
