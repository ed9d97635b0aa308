#include <doctest.h>

#include <cmath>
#include <random>

#include "kg/propagator.hpp"

using namespace kg;

namespace {

FieldPair random_state(GridPtr g, unsigned seed, double amp = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  FieldPair s = zero_state(g);
  for (int i = 0; i < g->N; ++i) {
    const double env = std::exp(-0.1 * g->r[i]);
    s.u[i] = amp * env * dist(rng);
    s.v[i] = amp * env * dist(rng);
  }
  return s;
}

double state_dist(const FieldPair& a, const FieldPair& b) {
  return std::sqrt((a.u - b.u).squaredNorm() + (a.v - b.v).squaredNorm());
}

}  // namespace

TEST_CASE("sharp linear decay exponent") {
  CHECK(decay_rate(0.25) == doctest::Approx(0.25));
  CHECK(decay_rate(1.0) == doctest::Approx(1.0));
  CHECK(decay_rate(2.0) == doctest::Approx(2.0 - std::sqrt(3.0)));
}

TEST_CASE("mode multipliers match the closed forms") {
  // Underdamped: nu > alpha^2.
  {
    const double alpha = 0.3, nu = 2.0, t = 1.7;
    const double s = std::sqrt(nu - alpha * alpha);
    const auto [m, mt] = linear_multipliers(alpha, nu, t);
    const double e = std::exp(-alpha * t);
    CHECK(mt == doctest::Approx(e * std::sin(s * t) / s).epsilon(1e-14));
    CHECK(m == doctest::Approx(e * (std::cos(s * t) +
                                    alpha * std::sin(s * t) / s))
                   .epsilon(1e-14));
  }
  // Overdamped: nu < alpha^2.
  {
    const double alpha = 2.0, nu = 1.0, t = 0.9;
    const double s = std::sqrt(alpha * alpha - nu);
    const auto [m, mt] = linear_multipliers(alpha, nu, t);
    const double e = std::exp(-alpha * t);
    CHECK(mt == doctest::Approx(e * std::sinh(s * t) / s).epsilon(1e-14));
    CHECK(m == doctest::Approx(e * (std::cosh(s * t) +
                                    alpha * std::sinh(s * t) / s))
                   .epsilon(1e-14));
  }
}

TEST_CASE("mode multipliers are continuous through the degenerate point") {
  const double alpha = 1.0, t = 2.3;
  const auto [m0, mt0] = linear_multipliers(alpha, 1.0, t);
  // Exactly critical: m = e^{-t}(1 + t), mt = t e^{-t}.
  CHECK(m0 == doctest::Approx(std::exp(-t) * (1.0 + t)).epsilon(1e-12));
  CHECK(mt0 == doctest::Approx(t * std::exp(-t)).epsilon(1e-12));
  for (double eps : {1e-9, -1e-9, 1e-13, -1e-13}) {
    const auto [m, mt] = linear_multipliers(alpha, 1.0 + eps, t);
    CHECK(m == doctest::Approx(m0).epsilon(1e-9));
    CHECK(mt == doctest::Approx(mt0).epsilon(1e-9));
  }
}

TEST_CASE("linear flow has the exact semigroup property") {
  auto g = build_grid(1, 20.0, 128);
  LinearFlow flow(g, 0.4);
  const FieldPair s0 = random_state(g, 23);
  const FieldPair two_steps = flow.step(flow.step(s0, 0.13), 0.13);
  const FieldPair one_step = flow.step(s0, 0.26);
  CHECK(state_dist(two_steps, one_step) < 1e-11 * (1.0 + s0.u.norm()));
}

TEST_CASE("undamped linear flow conserves the quadratic energy") {
  auto g = build_grid(3, 15.0, 128);
  LinearFlow flow(g, 0.0);
  FieldPair s = random_state(g, 31);
  const double e0 = flow.quadratic_energy(s);
  for (int k = 0; k < 200; ++k) s = flow.step(s, 0.05);
  CHECK(flow.quadratic_energy(s) == doctest::Approx(e0).epsilon(1e-11));
}

TEST_CASE("undamped linear flow is time reversible") {
  auto g = build_grid(1, 20.0, 128);
  LinearFlow flow(g, 0.0);
  const FieldPair s0 = random_state(g, 47);
  const FieldPair back = flow.step(flow.step(s0, 0.37), -0.37);
  CHECK(state_dist(back, s0) < 1e-11);
}

TEST_CASE("slowest mode decays at the sharp linear rate") {
  auto g = build_grid(1, 30.0, 256);
  for (double alpha : {0.25, 1.5}) {
    LinearFlow flow(g, alpha);
    // Lowest eigenvalue of -Lap + 1 on the truncated domain is 1 + O(R^-2);
    // its mode decays like e^{-beta t} with beta = decay_rate(alpha) (up to
    // the truncation shift, absorbed by the 5% tolerance).
    Eigen::VectorXd nu;
    Eigen::MatrixXd modes;
    tridiag_eigensystem(flow.op(), nu, modes);
    FieldPair s = zero_state(g);
    s.u = modes.col(0).cwiseQuotient(flow.geometry().sqrt_m);
    // Project out the transient branch for alpha > 1 by sampling late.
    const double dt = 0.05;
    std::vector<std::pair<double, double>> pts;
    double t = 0.0;
    for (int k = 0; k <= 500; ++k) {
      if (t >= 5.0)
        pts.emplace_back(t, std::sqrt(flow.quadratic_energy(s)));
      s = flow.step(s, dt);
      t += dt;
    }
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto [tt, vv] : pts) {
      const double y = std::log(vv);
      st += tt;
      sy += y;
      stt += tt * tt;
      sty += tt * y;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double beta = decay_rate(alpha);
    CHECK(std::abs(-slope - beta) < 0.05 * beta);
  }
}

TEST_CASE("nonlinear stepping is second order in dt") {
  auto g = build_grid(1, 20.0, 128);
  auto spec = NonlinearitySpec::pure_power(3.0, 1);
  LinearFlow flow(g, 0.5);
  const FieldPair s0 = random_state(g, 61, 0.3);
  auto advance = [&](double dt, double T) {
    FieldPair s = s0;
    const int n = static_cast<int>(std::llround(T / dt));
    for (int k = 0; k < n; ++k) s = step(s, spec, flow, dt);
    return s;
  };
  const FieldPair ref = advance(1.0 / 512.0, 1.0);
  const double e1 = state_dist(advance(1.0 / 64.0, 1.0), ref);
  const double e2 = state_dist(advance(1.0 / 128.0, 1.0), ref);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.5);
}

TEST_CASE("evolve records and stops at the horizon") {
  auto g = build_grid(1, 20.0, 64);
  auto spec = NonlinearitySpec::pure_power(3.0, 1);
  SimulationParams params;
  params.alpha = 0.5;
  params.dt = 0.01;
  params.T = 1.0;
  params.record_every = 20;
  const Trajectory traj = evolve(random_state(g, 71, 0.1), spec, params);
  CHECK(traj.reason == StopReason::horizon);
  CHECK(traj.scalars.size() == 101);
  CHECK(traj.t_end == doctest::Approx(1.0));
  CHECK(traj.states.size() == 6);  // t = 0 plus every 20th step
  // Energy decreases monotonically under damping at this amplitude.
  CHECK(traj.scalars.back().E < traj.scalars.front().E);
  // The dissipation identity holds to the splitting error.
  std::vector<DissipationSample> ds;
  for (const auto& s : traj.scalars) ds.push_back({s.t, s.E, s.l2v_sq});
  CHECK(dissipation_residual(ds, params.alpha) < 1e-4);
}

TEST_CASE("evolve flags the norm cap") {
  auto g = build_grid(1, 20.0, 64);
  auto spec = NonlinearitySpec::pure_power(3.0, 1);
  SimulationParams params;
  params.alpha = 0.1;
  params.dt = 0.005;
  params.T = 10.0;
  params.blowup_norm_cap = 100.0;
  // Large data with negative energy blows up in finite time.
  FieldPair s0 = zero_state(g);
  for (int i = 0; i < g->N; ++i)
    s0.u[i] = 3.0 * std::sqrt(2.0) / std::cosh(g->r[i]);
  const Trajectory traj = evolve(s0, spec, params);
  CHECK(traj.reason == StopReason::norm_cap);
  CHECK(traj.t_end < 10.0);
  CHECK(traj.t_last_ok < traj.t_end);
}
