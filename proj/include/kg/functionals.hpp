#pragma once

#include <vector>

#include "kg/grid.hpp"
#include "kg/nonlinearity.hpp"
#include "kg/operators.hpp"

namespace kg {

/// Snapshot of the discrete-model functionals of a state. These are the
/// exact counterparts for the semi-discrete dynamics: the H^1 part is the
/// quadratic form of the discrete operator, so the coercivity identity and
/// the dissipation identity hold to roundoff / to the time-splitting error.
struct EnergyReport {
  double E = 0.0;
  double K0 = 0.0;
  double h1_sq = 0.0;
  double l2v_sq = 0.0;
  double ar_slack = 0.0;
};

EnergyReport report(const FieldPair& state, const NonlinearitySpec& spec,
                    const FluxGeometry& geom);
EnergyReport report(const FieldPair& state, const NonlinearitySpec& spec);

/// Continuum-accurate energy integral(|grad u|^2/2 + u^2/2 + v^2/2 - F(u)):
/// sixth-order gradient plus origin-corrected quadrature. Use this when the
/// value is compared against closed-form integrals; use `report` when an
/// exact discrete identity matters.
double energy(const FieldPair& state, const NonlinearitySpec& spec);

/// Continuum-accurate Nehari functional integral(|grad u|^2 + u^2 - u f(u)).
double k0(const Eigen::VectorXd& u, const NonlinearitySpec& spec,
          const RadialGrid& g);

/// Continuum-accurate squared norms (H^1 x L^2 pieces).
double h1_norm_sq(const Eigen::VectorXd& u, const RadialGrid& g);
double l2_norm_sq(const Eigen::VectorXd& u, const RadialGrid& g);

/// lhs = gamma (||u||_{H1}^2 + ||v||_{L2}^2), rhs = 2(1+gamma) E - K0, all in
/// the discrete-model forms so lhs <= rhs holds up to the sign of the
/// superquadraticity slack.
struct CoercivityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ar_violated = false;  // slack > tolerance for the supplied gamma
};

CoercivityCheck coercivity_check(const FieldPair& state,
                                 const NonlinearitySpec& spec);

/// Worst residual |E(t2) - E(t1) + 2 alpha int_{t1}^{t2} ||v||^2 dt| over
/// sample pairs, with trapezoidal time quadrature. Samples must be uniformly
/// spaced in t; throws on fewer than 2 samples.
struct DissipationSample {
  double t = 0.0;
  double E = 0.0;
  double l2v_sq = 0.0;
};

double dissipation_residual(const std::vector<DissipationSample>& samples,
                            double alpha);

}  // namespace kg
