#include "kg/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

namespace {

// Quadrature of a pointwise integrand q over the ball. The node weights
// already account for the origin (on the grid for d = 1, weight ~ r^{d-1}
// suppressed for d >= 2) and for the zero Dirichlet endpoint at r = R.
double continuum_quadrature(const RadialGrid& g, const Eigen::VectorXd& q) {
  return g.w.dot(q);
}

}  // namespace

EnergyReport report(const FieldPair& state, const NonlinearitySpec& spec,
                    const FluxGeometry& geom) {
  EnergyReport rep;
  const auto& u = state.u;
  const auto& v = state.v;
  const double grad = grad_form(geom, u);
  const double mass = norm_sq_m(geom, u);
  rep.h1_sq = grad + mass;
  rep.l2v_sq = norm_sq_m(geom, v);
  double Fsum = 0.0, ufsum = 0.0, slack = 0.0;
  if (!spec.is_zero()) {
    const double g2 = 2.0 * (1.0 + spec.gamma());
    for (int i = 0; i < u.size(); ++i) {
      const double Fi = spec.F(u[i]);
      const double ufi = u[i] * spec.f(u[i]);
      Fsum += geom.m[i] * Fi;
      ufsum += geom.m[i] * ufi;
      slack += geom.m[i] * (g2 * Fi - ufi);
    }
  }
  rep.E = 0.5 * (rep.h1_sq + rep.l2v_sq) - Fsum;
  rep.K0 = rep.h1_sq - ufsum;
  rep.ar_slack = slack;
  return rep;
}

EnergyReport report(const FieldPair& state, const NonlinearitySpec& spec) {
  return report(state, spec, flux_geometry(*state.grid));
}

double h1_norm_sq(const Eigen::VectorXd& u, const RadialGrid& g) {
  const Eigen::VectorXd du = gradient_high_order(g, u);
  const Eigen::VectorXd q = du.cwiseAbs2() + u.cwiseAbs2();
  return continuum_quadrature(g, q);
}

double l2_norm_sq(const Eigen::VectorXd& u, const RadialGrid& g) {
  return continuum_quadrature(g, u.cwiseAbs2());
}

double energy(const FieldPair& state, const NonlinearitySpec& spec) {
  const RadialGrid& g = *state.grid;
  const Eigen::VectorXd du = gradient_high_order(g, state.u);
  Eigen::VectorXd q(g.N);
  for (int i = 0; i < g.N; ++i)
    q[i] = 0.5 * (du[i] * du[i] + state.u[i] * state.u[i] +
                  state.v[i] * state.v[i]) -
           spec.F(state.u[i]);
  return continuum_quadrature(g, q);
}

double k0(const Eigen::VectorXd& u, const NonlinearitySpec& spec,
          const RadialGrid& g) {
  const Eigen::VectorXd du = gradient_high_order(g, u);
  Eigen::VectorXd q(g.N);
  for (int i = 0; i < g.N; ++i)
    q[i] = du[i] * du[i] + u[i] * u[i] - u[i] * spec.f(u[i]);
  return continuum_quadrature(g, q);
}

CoercivityCheck coercivity_check(const FieldPair& state,
                                 const NonlinearitySpec& spec) {
  const EnergyReport rep = report(state, spec);
  CoercivityCheck c;
  const double gamma = spec.is_zero() ? 1.0 : spec.gamma();
  c.lhs = gamma * (rep.h1_sq + rep.l2v_sq);
  c.rhs = 2.0 * (1.0 + gamma) * rep.E - rep.K0;
  c.ar_violated = rep.ar_slack > 1e-12 * (1.0 + std::abs(rep.E));
  return c;
}

double dissipation_residual(const std::vector<DissipationSample>& samples,
                            double alpha) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("dissipation: need at least 2 samples");
  // Running trapezoid of ||v||^2; residual of E(t) - E(0) + 2a*int against 0,
  // maximized over end times (pairs (0, k) dominate pairs (j, k)).
  double integral = 0.0;
  double worst = 0.0;
  for (int k = 1; k < n; ++k) {
    const double dt = samples[k].t - samples[k - 1].t;
    integral += 0.5 * dt * (samples[k].l2v_sq + samples[k - 1].l2v_sq);
    const double res =
        std::abs(samples[k].E - samples[0].E + 2.0 * alpha * integral);
    worst = std::max(worst, res);
  }
  return worst;
}

}  // namespace kg
