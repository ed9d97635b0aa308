#pragma once

#include <utility>
#include <vector>

#include "kg/functionals.hpp"
#include "kg/grid.hpp"
#include "kg/nonlinearity.hpp"
#include "kg/operators.hpp"

namespace kg {

/// Sharp linear decay exponent: alpha for 0 <= alpha <= 1,
/// alpha - sqrt(alpha^2 - 1) for alpha > 1.
double decay_rate(double alpha);

/// Position responses (m, mt) of a single damped mode
/// x'' + 2 alpha x' + nu x = 0 to initial data (1, 0) and (0, 1).
/// Trigonometric for nu > alpha^2, hyperbolic for nu < alpha^2, and the
/// degenerate limit (e^{-alpha t}(1 + alpha t), t e^{-alpha t}) in between.
std::pair<double, double> linear_multipliers(double alpha, double nu, double t);

/// Exact discrete flow of u_tt + 2 alpha u_t - Lap u + u = 0 via the full
/// eigen-decomposition of the symmetrized discrete operator.
class LinearFlow {
 public:
  LinearFlow(GridPtr grid, double alpha);

  FieldPair step(const FieldPair& state, double dt) const;

  const Eigen::VectorXd& eigenvalues() const { return nu_; }
  const FluxGeometry& geometry() const { return op_.geom; }
  const SymTridiag& op() const { return op_; }
  double alpha() const { return alpha_; }
  GridPtr grid() const { return grid_; }

  /// Quadratic energy (grad form + mass + kinetic)/2 conserved exactly by
  /// the alpha = 0 flow.
  double quadratic_energy(const FieldPair& state) const;

 private:
  GridPtr grid_;
  double alpha_ = 0.0;
  SymTridiag op_;
  Eigen::VectorXd nu_;      // eigenvalues of -Lap + 1, ascending
  Eigen::MatrixXd modes_;   // orthonormal eigenvectors in y-space
  // per-dt cache of the 2x2 mode propagators
  mutable double cached_dt_ = -1.0;
  mutable Eigen::VectorXd puu_, puv_, pvu_, pvv_;
  void refresh_cache(double dt) const;
};

FieldPair linear_step(const LinearFlow& flow, const FieldPair& state,
                      double dt);

/// One Strang step (half nonlinear kick, exact linear drift, half kick).
FieldPair step(const FieldPair& state, const NonlinearitySpec& spec,
               const LinearFlow& flow, double dt);

struct SimulationParams {
  double alpha = 0.5;
  double dt = 0.01;
  double T = 40.0;
  double blowup_norm_cap = 1e6;  // on the H1 x L2 norm
  int record_every = 10;
};

enum class StopReason { horizon, norm_cap, nonfinite };

struct ScalarSample {
  double t = 0.0;
  double E = 0.0;
  double K0 = 0.0;
  double h1_sq = 0.0;
  double l2v_sq = 0.0;
  double ydot = 0.0;
  double linf_u = 0.0;
  double l2u_sq = 0.0;  // not part of the CSV contract; feeds convexity y(t)
};

struct Trajectory {
  std::vector<ScalarSample> scalars;                  // every step
  std::vector<std::pair<double, FieldPair>> states;   // every record_every
  StopReason reason = StopReason::horizon;
  double t_end = 0.0;
  double t_last_ok = 0.0;  // last sample time with norm below the cap
};

Trajectory evolve(const FieldPair& state0, const NonlinearitySpec& spec,
                  const SimulationParams& params);
Trajectory evolve(const FieldPair& state0, const NonlinearitySpec& spec,
                  const SimulationParams& params, const LinearFlow& flow);

}  // namespace kg
