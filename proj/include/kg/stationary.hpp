#pragma once

#include <functional>
#include <vector>

#include "kg/grid.hpp"
#include "kg/nonlinearity.hpp"

namespace kg {

enum class ShootClass {
  decays,      // |Q| + |Q'| below threshold past the last turning point
  falls_back,  // turning point at nonzero |Q| moving away from zero
  diverges,    // |Q| exceeded the divergence cap
  step_failure
};

struct ShootOutcome {
  ShootClass cls = ShootClass::step_failure;
  int zero_crossings = 0;
  double r_exit = 0.0;
  double q_exit = 0.0;
  double qp_exit = 0.0;
};

/// Integrates Q'' = -((d-1)/r) Q' + Q - f(Q), Q(0) = s0, Q'(0) = 0 with an
/// adaptive embedded RK pair, starting from the even series expansion
/// Q(r) ~ s0 + (s0 - f(s0)) r^2 / (2d) near the origin.
ShootOutcome shoot(const NonlinearitySpec& spec, int d, double s0,
                   double r_max);

struct StationaryProfile {
  GridPtr grid;
  Eigen::VectorXd Q;
  int nodes = 0;        // sign changes on the grid
  double s0 = 0.0;      // Q(0)
  double residual = 0.0;
  double energy = 0.0;  // E(Q, 0)
  double k0 = 0.0;
};

/// Shooting bisection for the radial equilibrium with `ell` sign changes,
/// refined by damped Newton on a discrete elliptic system (fourth-order
/// compact scheme for d = 1 and d = 3, the second-order conservative scheme
/// otherwise). Throws std::runtime_error when no bracket exists in the
/// scanned s0 range or Newton fails.
StationaryProfile find_stationary(const NonlinearitySpec& spec, GridPtr grid,
                                  int ell);

/// |K0(Q)| under the continuum-accurate quadrature.
double nehari_residual(const StationaryProfile& profile,
                       const NonlinearitySpec& spec);

/// All equilibria with node counts 0..max_ell that the scan finds; entries
/// with missing brackets are skipped.
std::vector<StationaryProfile> build_catalog(const NonlinearitySpec& spec,
                                             GridPtr grid, int max_ell);

/// Clamped cubic spline through (0, s0), the grid nodes, and (R, 0), with
/// zero slope at the origin. Used to evaluate a profile off the grid.
std::function<double(double)> profile_interpolant(
    const StationaryProfile& profile);

}  // namespace kg
