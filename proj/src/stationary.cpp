#include "kg/stationary.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kg/functionals.hpp"
#include "kg/operators.hpp"

namespace kg {

namespace {

using State2 = std::array<double, 2>;  // (Q, Q')

struct RadialRhs {
  const NonlinearitySpec* spec;
  int d;
  void operator()(const State2& y, State2& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -((d - 1) / r) * y[1] + y[0] - spec->f(y[0]);
  }
};

State2 series_start(const NonlinearitySpec& spec, int d, double s0,
                    double r0) {
  const double curv = (s0 - spec.f(s0)) / (2.0 * d);
  return {s0 + curv * r0 * r0, 2.0 * curv * r0};
}

}  // namespace

ShootOutcome shoot(const NonlinearitySpec& spec, int d, double s0,
                   double r_max) {
  namespace ode = boost::numeric::odeint;
  ShootOutcome out;
  const double r0 = 1e-4;
  State2 y = series_start(spec, d, s0, r0);
  double r = r0;
  auto stepper = ode::make_controlled(1e-12, 1e-12,
                                      ode::runge_kutta_dopri5<State2>());
  RadialRhs rhs{&spec, d};
  const double div_cap = 3.0 * std::abs(s0) + 10.0;
  const double decay_tol = 1e-10 * (1.0 + std::abs(s0));
  const double small = 1e-6 * (1.0 + std::abs(s0));
  double dr = 1e-3;
  bool decreased_in_lobe = false;
  double prev_abs = std::abs(y[0]);
  while (r < r_max) {
    State2 ynew = y;
    double rtry = r;
    double drtry = std::min(dr, r_max - r);
    int fails = 0;
    while (ode::fail ==
           stepper.try_step(rhs, ynew, rtry, drtry)) {
      if (++fails > 60 || !(drtry > 0.0)) {
        out.cls = ShootClass::step_failure;
        out.r_exit = r;
        out.q_exit = y[0];
        out.qp_exit = y[1];
        return out;
      }
    }
    dr = drtry;
    if (ynew[0] == 0.0 || (ynew[0] > 0.0) != (y[0] > 0.0)) {
      ++out.zero_crossings;
      decreased_in_lobe = false;  // restart the turning-point watch per lobe
    }
    y = ynew;
    r = rtry;
    const double a = std::abs(y[0]);
    if (a < prev_abs) decreased_in_lobe = true;
    prev_abs = a;
    if (a > div_cap) {
      out.cls = ShootClass::diverges;
      break;
    }
    if (a + std::abs(y[1]) < decay_tol && y[0] * y[1] < 0.0) {
      out.cls = ShootClass::decays;
      break;
    }
    if (decreased_in_lobe && y[0] * y[1] > 0.0 && a > small) {
      out.cls = ShootClass::falls_back;
      break;
    }
    if (r >= r_max) {
      out.cls = (a + std::abs(y[1]) < small) ? ShootClass::decays
                                             : ShootClass::falls_back;
      break;
    }
  }
  out.r_exit = r;
  out.q_exit = y[0];
  out.qp_exit = y[1];
  return out;
}

namespace {

// Trajectory sampled at the grid nodes, with the unreliable region past the
// minimum of |Q| + |Q'| replaced by the exponential tail asymptotics.
Eigen::VectorXd trace_at_nodes(const NonlinearitySpec& spec, int d, double s0,
                               const RadialGrid& g) {
  namespace ode = boost::numeric::odeint;
  const double r0 = 1e-4;
  State2 y = series_start(spec, d, s0, r0);
  RadialRhs rhs{&spec, d};
  auto stepper = ode::make_dense_output(1e-12, 1e-12,
                                        ode::runge_kutta_dopri5<State2>());
  stepper.initialize(y, r0, 1e-3);
  Eigen::VectorXd Q(g.N), P(g.N);
  const double cap = 10.0 * (std::abs(s0) + 1.0);
  int last_good = -1;
  for (int i = 0; i < g.N; ++i) {
    if (g.r[i] < r0) {  // origin node (d = 1) precedes the integration start
      Q[i] = s0;
      P[i] = 0.0;
      last_good = i;
      continue;
    }
    while (stepper.current_time() < g.r[i]) {
      stepper.do_step(rhs);
      if (std::abs(stepper.current_state()[0]) > cap) break;
    }
    if (std::abs(stepper.current_state()[0]) > cap) break;
    State2 yi;
    stepper.calc_state(g.r[i], yi);
    Q[i] = yi[0];
    P[i] = yi[1];
    last_good = i;
  }
  if (last_good < 0)
    throw std::runtime_error("stationary: shooting trace left the domain");
  int imin = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= last_good; ++i) {
    const double a = std::abs(Q[i]) + std::abs(P[i]);
    if (a < best) {
      best = a;
      imin = i;
    }
  }
  // Tail: Q ~ C r^{-(d-1)/2} e^{-r}.
  const double k = 0.5 * (d - 1);
  for (int i = imin + 1; i < g.N; ++i)
    Q[i] = Q[imin] * std::pow(g.r[imin] / g.r[i], k) *
           std::exp(-(g.r[i] - g.r[imin]));
  return Q;
}

void thomas_solve(Eigen::VectorXd& lower, Eigen::VectorXd& diag,
                  Eigen::VectorXd& upper, Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = lower[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ODE-scale sup norm of the defect
  bool converged = false;
};

// Fourth-order compact (Numerov) system for d = 1 on the grid nodes 0..N-1
// (node 0 is the origin, closed by even symmetry; Q vanishes at r = R = Nh):
// Q'' = g(Q), g = Q - f(Q).
NewtonResult newton_numerov_1d(const NonlinearitySpec& spec,
                               const RadialGrid& grid,
                               const Eigen::VectorXd& guess) {
  const int N = grid.N;
  const int n = N;
  const double h2 = grid.h * grid.h;
  Eigen::VectorXd x = guess;
  auto gval = [&](double q) { return q - spec.f(q); };
  auto gder = [&](double q) { return 1.0 - spec.fprime(q); };
  auto residual_vec = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd G(n), gv(n);
    for (int i = 0; i < n; ++i) gv[i] = gval(z[i]);
    G[0] = 2.0 * z[1] - 2.0 * z[0] - (h2 / 12.0) * (2.0 * gv[1] + 10.0 * gv[0]);
    for (int i = 1; i < n - 1; ++i)
      G[i] = z[i + 1] - 2.0 * z[i] + z[i - 1] -
             (h2 / 12.0) * (gv[i + 1] + 10.0 * gv[i] + gv[i - 1]);
    G[n - 1] = -2.0 * z[n - 1] + z[n - 2] -
               (h2 / 12.0) * (10.0 * gv[n - 1] + gv[n - 2]);
    return G;
  };
  NewtonResult res;
  Eigen::VectorXd G = residual_vec(x);
  for (int iter = 0; iter < 60; ++iter) {
    if (G.cwiseAbs().maxCoeff() < 1e-13) break;
    Eigen::VectorXd lower(n - 1), diag(n), upper(n - 1);
    for (int i = 0; i < n; ++i)
      diag[i] = -2.0 - (10.0 * h2 / 12.0) * gder(x[i]);
    for (int i = 0; i + 1 < n; ++i) {
      upper[i] = 1.0 - (h2 / 12.0) * gder(x[i + 1]);
      lower[i] = 1.0 - (h2 / 12.0) * gder(x[i]);
    }
    upper[0] *= 2.0;  // even closure doubles the first coupling
    Eigen::VectorXd rhs = -G;
    thomas_solve(lower, diag, upper, rhs);
    double lam = 1.0;
    const double g0 = G.norm();
    for (int bt = 0; bt < 12; ++bt) {
      Eigen::VectorXd xt = x + lam * rhs;
      Eigen::VectorXd Gt = residual_vec(xt);
      if (Gt.norm() < g0 || lam < 1e-3) {
        x = xt;
        G = Gt;
        break;
      }
      lam *= 0.5;
    }
  }
  res.x = x;
  res.residual = G.cwiseAbs().maxCoeff() / h2;
  res.converged = res.residual < 1e-8;
  return res;
}

// Fourth-order compact system for d = 3 in phi = r*Q on nodes 1..N with
// phi(0) = 0 and phi(R) = 0: phi'' = g(r, phi), g = phi - r f(phi/r).
NewtonResult newton_numerov_3d(const NonlinearitySpec& spec,
                               const RadialGrid& grid,
                               const Eigen::VectorXd& guess_Q) {
  const int N = grid.N;
  const double h2 = grid.h * grid.h;
  Eigen::VectorXd x = guess_Q.cwiseProduct(grid.r);
  auto gval = [&](int i, double p) {
    return p - grid.r[i] * spec.f(p / grid.r[i]);
  };
  auto gder = [&](int i, double p) { return 1.0 - spec.fprime(p / grid.r[i]); };
  auto residual_vec = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd G(N), gv(N);
    for (int i = 0; i < N; ++i) gv[i] = gval(i, z[i]);
    for (int i = 0; i < N; ++i) {
      const double zl = (i == 0) ? 0.0 : z[i - 1];
      const double zr = (i == N - 1) ? 0.0 : z[i + 1];
      const double gl = (i == 0) ? 0.0 : gv[i - 1];
      const double gr = (i == N - 1) ? 0.0 : gv[i + 1];
      G[i] = zr - 2.0 * z[i] + zl - (h2 / 12.0) * (gr + 10.0 * gv[i] + gl);
    }
    return G;
  };
  NewtonResult res;
  Eigen::VectorXd G = residual_vec(x);
  for (int iter = 0; iter < 60; ++iter) {
    if (G.cwiseAbs().maxCoeff() < 1e-13) break;
    Eigen::VectorXd lower(N - 1), diag(N), upper(N - 1);
    for (int i = 0; i < N; ++i)
      diag[i] = -2.0 - (10.0 * h2 / 12.0) * gder(i, x[i]);
    for (int i = 0; i + 1 < N; ++i) {
      upper[i] = 1.0 - (h2 / 12.0) * gder(i + 1, x[i + 1]);
      lower[i] = 1.0 - (h2 / 12.0) * gder(i, x[i]);
    }
    Eigen::VectorXd rhs = -G;
    thomas_solve(lower, diag, upper, rhs);
    double lam = 1.0;
    const double g0 = G.norm();
    for (int bt = 0; bt < 12; ++bt) {
      Eigen::VectorXd xt = x + lam * rhs;
      Eigen::VectorXd Gt = residual_vec(xt);
      if (Gt.norm() < g0 || lam < 1e-3) {
        x = xt;
        G = Gt;
        break;
      }
      lam *= 0.5;
    }
  }
  res.x = x.cwiseQuotient(grid.r);
  res.residual = G.cwiseAbs().maxCoeff() / h2;
  res.converged = res.residual < 1e-8;
  return res;
}

// Second-order conservative scheme for the remaining dimensions:
// Lap(u) - u + f(u) = 0 on the grid nodes.
NewtonResult newton_flux(const NonlinearitySpec& spec, const RadialGrid& grid,
                         const Eigen::VectorXd& guess_Q) {
  const int N = grid.N;
  const FluxGeometry geom = flux_geometry(grid);
  const double ceff = geom.cface[0] - geom.c_half / 3.0;
  Eigen::VectorXd x = guess_Q;
  auto residual_vec = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd G(N);
    for (int i = 0; i < N; ++i) {
      double lap;
      if (i == 0) {
        lap = -ceff * (z[0] - z[1]) / grid.w[0];
      } else {
        const double zr = (i == N - 1) ? 0.0 : z[i + 1];
        lap = (geom.cface[i - 1] * (z[i - 1] - z[i]) +
               geom.cface[i] * (zr - z[i])) /
              grid.w[i];
      }
      G[i] = lap - z[i] + spec.f(z[i]);
    }
    return G;
  };
  NewtonResult res;
  Eigen::VectorXd G = residual_vec(x);
  for (int iter = 0; iter < 60; ++iter) {
    if (G.cwiseAbs().maxCoeff() < 1e-12) break;
    Eigen::VectorXd lower(N - 1), diag(N), upper(N - 1);
    for (int i = 0; i < N; ++i) {
      const double cl = (i == 0) ? 0.0 : geom.cface[i - 1];
      const double cc = (i == 0) ? ceff : cl + geom.cface[i];
      diag[i] = -cc / grid.w[i] - 1.0 + spec.fprime(x[i]);
    }
    for (int i = 0; i + 1 < N; ++i) {
      upper[i] = ((i == 0) ? ceff : geom.cface[i]) / grid.w[i];
      lower[i] = geom.cface[i] / grid.w[i + 1];
    }
    Eigen::VectorXd rhs = -G;
    thomas_solve(lower, diag, upper, rhs);
    double lam = 1.0;
    const double g0 = G.norm();
    for (int bt = 0; bt < 12; ++bt) {
      Eigen::VectorXd xt = x + lam * rhs;
      Eigen::VectorXd Gt = residual_vec(xt);
      if (Gt.norm() < g0 || lam < 1e-3) {
        x = xt;
        G = Gt;
        break;
      }
      lam *= 0.5;
    }
  }
  res.x = x;
  res.residual = G.cwiseAbs().maxCoeff();
  res.converged = res.residual < 1e-8;
  return res;
}

int count_sign_changes(const Eigen::VectorXd& Q, double floor_val) {
  int n = 0;
  double prev = 0.0;
  for (int i = 0; i < Q.size(); ++i) {
    if (std::abs(Q[i]) < floor_val) continue;
    if (prev != 0.0 && (Q[i] > 0.0) != (prev > 0.0)) ++n;
    prev = Q[i];
  }
  return n;
}

}  // namespace

StationaryProfile find_stationary(const NonlinearitySpec& spec, GridPtr grid,
                                  int ell) {
  if (spec.is_zero())
    throw std::invalid_argument("stationary: nonlinearity must be nonzero");
  if (ell < 0) throw std::invalid_argument("stationary: ell must be >= 0");
  const int d = grid->d;
  const double r_max = grid->R;
  auto crossings = [&](double s0) {
    const ShootOutcome o = shoot(spec, d, s0, r_max);
    if (o.cls == ShootClass::step_failure)
      throw std::runtime_error("stationary: shooting integrator failed");
    return o.zero_crossings;
  };
  // Upward scan for a bracket [lo, hi] with n(lo) <= ell < n(hi).
  const double s_min = 0.01, s_max = 2e4;
  double lo = 0.0, hi = 0.0;
  double prev = s_min;
  int n_prev = crossings(prev);
  if (n_prev <= ell) {
    for (double s = prev * 1.12; s < s_max; s *= 1.12) {
      const int n = crossings(s);
      if (n_prev <= ell && n > ell) {
        lo = prev;
        hi = s;
        break;
      }
      prev = s;
      n_prev = n;
    }
  }
  if (hi == 0.0) {
    std::ostringstream msg;
    msg << "stationary: no shooting bracket for " << ell
        << " nodes with s0 in [" << s_min << ", " << s_max << "]";
    throw std::runtime_error(msg.str());
  }
  for (int it = 0; it < 90 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (crossings(mid) > ell ? hi : lo) = mid;
  }
  const double s0_shoot = 0.5 * (lo + hi);

  const Eigen::VectorXd guess = trace_at_nodes(spec, d, s0_shoot, *grid);
  NewtonResult nr;
  if (d == 1)
    nr = newton_numerov_1d(spec, *grid, guess);
  else if (d == 3)
    nr = newton_numerov_3d(spec, *grid, guess);
  else
    nr = newton_flux(spec, *grid, guess);
  if (!nr.converged)
    throw std::runtime_error("stationary: Newton refinement did not converge");

  StationaryProfile p;
  p.grid = grid;
  p.Q = nr.x;
  p.s0 = value_at_origin(*grid, p.Q);
  p.residual = nr.residual;
  const double amp = p.Q.cwiseAbs().maxCoeff();
  p.nodes = count_sign_changes(p.Q, 1e-9 * amp);
  if (p.nodes != ell)
    throw std::runtime_error(
        "stationary: refined profile lost the requested node count");
  FieldPair st;
  st.u = p.Q;
  st.v = Eigen::VectorXd::Zero(grid->N);
  st.grid = grid;
  p.energy = energy(st, spec);
  p.k0 = k0(p.Q, spec, *grid);
  return p;
}

double nehari_residual(const StationaryProfile& profile,
                       const NonlinearitySpec& spec) {
  return std::abs(k0(profile.Q, spec, *profile.grid));
}

std::vector<StationaryProfile> build_catalog(const NonlinearitySpec& spec,
                                             GridPtr grid, int max_ell) {
  std::vector<StationaryProfile> out;
  for (int ell = 0; ell <= max_ell; ++ell) {
    try {
      out.push_back(find_stationary(spec, grid, ell));
    } catch (const std::runtime_error&) {
      // no equilibrium with this node count in the scanned range
    }
  }
  return out;
}

std::function<double(double)> profile_interpolant(
    const StationaryProfile& profile) {
  const RadialGrid& g = *profile.grid;
  std::vector<double> vals;
  if (g.d == 1) {
    // The origin is already the first node; just append the Dirichlet zero.
    vals.resize(g.N + 1);
    for (int i = 0; i < g.N; ++i) vals[i] = profile.Q[i];
    vals[g.N] = 0.0;
  } else {
    vals.resize(g.N + 2);
    vals[0] = profile.s0;
    for (int i = 0; i < g.N; ++i) vals[i + 1] = profile.Q[i];
    vals[g.N + 1] = 0.0;
  }
  const double right_slope =
      (3.0 * 0.0 - 4.0 * profile.Q[g.N - 1] + profile.Q[g.N - 2]) /
      (2.0 * g.h);
  auto spline =
      std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
          vals.data(), vals.size(), 0.0, g.h, 0.0, right_slope);
  const double R = g.R;
  return [spline, R](double r) {
    if (r <= 0.0) return (*spline)(0.0);
    if (r >= R) return 0.0;
    return (*spline)(r);
  };
}

}  // namespace kg
