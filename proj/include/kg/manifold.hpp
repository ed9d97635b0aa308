#pragma once

#include "kg/spectral.hpp"

namespace kg {

/// Spectral-gap certificate for a pair of decay rates 0 <= beta2 < beta1 and
/// semigroup constants C1, C2 >= 1 coupled through a Lipschitz nonlinear
/// remainder of constant lipR.
struct GapConditionReport {
  double C1 = 1.0, C2 = 1.0;
  double beta1 = 0.0, beta2 = 0.0;
  double lipR = 0.0;
  double condition_value = 0.0;  // (sqrt(C1)+sqrt(C2))^2/(beta1-beta2)*lipR
  bool holds = false;
  double gamma1 = 0.0, gamma2 = 0.0;  // roots of lambda(gamma)*lipR = 1
  double lipg_bound = 0.0;
};

/// lambda(gamma) = C1/(beta1-gamma) + C2/(gamma-beta2); requires
/// beta2 < gamma < beta1.
double lambda_gamma(double C1, double C2, double beta1, double beta2,
                    double gamma);

/// Condition value and flag only (roots / bound left zero unless the
/// condition holds, in which case they are filled in too).
GapConditionReport gap_condition(double C1, double C2, double beta1,
                                 double beta2, double lipR);

/// The two solutions gamma1 >= gamma2 of lambda(gamma)*lipR = 1 inside
/// (beta2, beta1), from the equivalent quadratic with a Newton polish;
/// residual |lambda(gamma_i)*lipR - 1| <= 1e-12. For lipR = 0 returns
/// (beta1, beta2) exactly. Throws when the gap condition fails.
std::pair<double, double> gamma_roots(double C1, double C2, double beta1,
                                      double beta2, double lipR);

/// min over gamma in [gamma2, gamma1] of
///   C1*C2*lipR*gamma / (beta1*(gamma-beta2)*(1 - lambda(gamma)*lipR)),
/// by bracketed golden-section refinement. Zero when lipR = 0.
double lipg_bound(double C1, double C2, double beta1, double beta2,
                  double lipR);

/// Two-sided graph-transform contraction check: the product of the forward
/// bound over rates (1-eps, 1-eta) and the backward bound over the
/// reciprocal rates ((1+eps)^{-1}, (1+eta)^{-1}) must come out below one.
struct CompoundGapResult {
  double forward = 0.0;
  double backward = 0.0;
  double product = 0.0;
  bool holds = false;
};

CompoundGapResult compound_gap_condition(double C1, double C2, double eta,
                                         double eps, double lipR,
                                         double lipRt);

/// Invariant-manifold dimension bookkeeping from a spectral report.
struct ManifoldDims {
  int dim_u = 0;   // one unstable direction per mu < 0
  int dim_c = 0;   // 1 iff the linearization has a one-dimensional kernel
  bool stable_codim_finite = false;  // stable part is infinite-dimensional
};

ManifoldDims manifold_dimensions(const SpectralReport& report);

}  // namespace kg
