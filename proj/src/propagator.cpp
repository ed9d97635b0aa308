#include "kg/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

double decay_rate(double alpha) {
  if (alpha <= 1.0) return alpha;
  return alpha - std::sqrt(alpha * alpha - 1.0);
}

std::pair<double, double> linear_multipliers(double alpha, double nu,
                                             double t) {
  const double disc = nu - alpha * alpha;
  const double e = std::exp(-alpha * t);
  // Near-degenerate discriminants: the closed forms below lose digits when
  // |disc| t^2 << 1, so switch to the series in disc*t^2.
  if (std::abs(disc) * t * t < 1e-12) {
    const double z = disc * t * t;
    // sin(st)/s = t (1 - z/6 + z^2/120), cos(st) = 1 - z/2 + z^2/24
    const double mt = e * t * (1.0 - z / 6.0 + z * z / 120.0);
    const double m = e * (1.0 - z / 2.0 + z * z / 24.0) + alpha * mt;
    return {m, mt};
  }
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    const double mt = e * std::sin(s * t) / s;
    const double m = e * std::cos(s * t) + alpha * mt;
    return {m, mt};
  }
  const double s = std::sqrt(-disc);
  const double mt = e * std::sinh(s * t) / s;
  const double m = e * std::cosh(s * t) + alpha * mt;
  return {m, mt};
}

LinearFlow::LinearFlow(GridPtr grid, double alpha)
    : grid_(std::move(grid)), alpha_(alpha) {
  op_ = assemble_operator(grid_, Eigen::VectorXd::Ones(grid_->N));
  tridiag_eigensystem(op_, nu_, modes_);
}

void LinearFlow::refresh_cache(double dt) const {
  if (dt == cached_dt_) return;
  const int N = static_cast<int>(nu_.size());
  puu_.resize(N);
  puv_.resize(N);
  pvu_.resize(N);
  pvv_.resize(N);
  for (int k = 0; k < N; ++k) {
    const auto [m, mt] = linear_multipliers(alpha_, nu_[k], dt);
    puu_[k] = m;
    puv_[k] = mt;
    // Derivatives of the responses: m' = -nu*mt, mt' = m - 2*alpha*mt.
    pvu_[k] = -nu_[k] * mt;
    pvv_[k] = m - 2.0 * alpha_ * mt;
  }
  cached_dt_ = dt;
}

FieldPair LinearFlow::step(const FieldPair& state, double dt) const {
  refresh_cache(dt);
  const int N = static_cast<int>(nu_.size());
  Eigen::MatrixXd y(N, 2);
  y.col(0) = op_.geom.sqrt_m.cwiseProduct(state.u);
  y.col(1) = op_.geom.sqrt_m.cwiseProduct(state.v);
  Eigen::MatrixXd a = modes_.transpose() * y;
  Eigen::MatrixXd b(N, 2);
  b.col(0) = puu_.cwiseProduct(a.col(0)) + puv_.cwiseProduct(a.col(1));
  b.col(1) = pvu_.cwiseProduct(a.col(0)) + pvv_.cwiseProduct(a.col(1));
  Eigen::MatrixXd z = modes_ * b;
  FieldPair out;
  out.grid = state.grid;
  out.u = z.col(0).cwiseQuotient(op_.geom.sqrt_m);
  out.v = z.col(1).cwiseQuotient(op_.geom.sqrt_m);
  return out;
}

double LinearFlow::quadratic_energy(const FieldPair& state) const {
  return 0.5 * (grad_form(op_.geom, state.u) + norm_sq_m(op_.geom, state.u) +
                norm_sq_m(op_.geom, state.v));
}

FieldPair linear_step(const LinearFlow& flow, const FieldPair& state,
                      double dt) {
  return flow.step(state, dt);
}

FieldPair step(const FieldPair& state, const NonlinearitySpec& spec,
               const LinearFlow& flow, double dt) {
  if (spec.is_zero()) return flow.step(state, dt);
  FieldPair s = state;
  for (int i = 0; i < s.u.size(); ++i) s.v[i] += 0.5 * dt * spec.f(s.u[i]);
  s = flow.step(s, dt);
  for (int i = 0; i < s.u.size(); ++i) s.v[i] += 0.5 * dt * spec.f(s.u[i]);
  return s;
}

namespace {

ScalarSample sample_of(double t, const FieldPair& s,
                       const NonlinearitySpec& spec, const FluxGeometry& geom,
                       double alpha) {
  ScalarSample out;
  const EnergyReport rep = report(s, spec, geom);
  out.t = t;
  out.E = rep.E;
  out.K0 = rep.K0;
  out.h1_sq = rep.h1_sq;
  out.l2v_sq = rep.l2v_sq;
  out.l2u_sq = norm_sq_m(geom, s.u);
  out.ydot = inner_m(geom, s.u, s.v) + alpha * out.l2u_sq;
  out.linf_u = s.u.size() ? s.u.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace

Trajectory evolve(const FieldPair& state0, const NonlinearitySpec& spec,
                  const SimulationParams& params, const LinearFlow& flow) {
  if (!(params.dt > 0.0) || !(params.T > 0.0))
    throw std::invalid_argument("evolve: dt and T must be positive");
  const FluxGeometry& geom = flow.geometry();
  Trajectory traj;
  FieldPair s = state0;
  const long long steps = std::llround(params.T / params.dt);
  traj.scalars.reserve(steps + 1);
  double t = 0.0;
  ScalarSample sample = sample_of(t, s, spec, geom, params.alpha);
  traj.scalars.push_back(sample);
  traj.states.emplace_back(t, s);
  traj.t_last_ok = t;
  for (long long k = 1; k <= steps; ++k) {
    s = step(s, spec, flow, params.dt);
    t = k * params.dt;
    sample = sample_of(t, s, spec, geom, params.alpha);
    traj.scalars.push_back(sample);
    if (k % params.record_every == 0 || k == steps)
      traj.states.emplace_back(t, s);
    if (!std::isfinite(sample.h1_sq) || !std::isfinite(sample.l2v_sq) ||
        !std::isfinite(sample.linf_u)) {
      traj.reason = StopReason::nonfinite;
      traj.t_end = t;
      return traj;
    }
    const double norm = std::sqrt(sample.h1_sq + sample.l2v_sq);
    if (norm > params.blowup_norm_cap) {
      traj.reason = StopReason::norm_cap;
      traj.t_end = t;
      return traj;
    }
    traj.t_last_ok = t;
  }
  traj.reason = StopReason::horizon;
  traj.t_end = t;
  return traj;
}

Trajectory evolve(const FieldPair& state0, const NonlinearitySpec& spec,
                  const SimulationParams& params) {
  LinearFlow flow(state0.grid, params.alpha);
  return evolve(state0, spec, params, flow);
}

}  // namespace kg
