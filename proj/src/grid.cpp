#include "kg/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

double sphere_surface(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

GridPtr build_grid(int d, double R, int N) {
  if (d < 1 || d > 6) throw std::invalid_argument("grid: d must be in 1..6");
  if (!(R > 0.0)) throw std::invalid_argument("grid: R must be positive");
  if (N < 16) throw std::invalid_argument("grid: N must be at least 16");
  auto g = std::make_shared<RadialGrid>();
  g->d = d;
  g->R = R;
  g->N = N;
  g->omega = sphere_surface(d);
  g->r.resize(N);
  g->w.resize(N);
  if (d == 1) {
    g->h = R / N;
    for (int i = 0; i < N; ++i) {
      g->r[i] = i * g->h;
      g->w[i] = (i == 0) ? g->h : 2.0 * g->h;
    }
  } else {
    g->h = R / (N + 1);
    for (int i = 0; i < N; ++i) {
      g->r[i] = (i + 1) * g->h;
      g->w[i] = g->omega * std::pow(g->r[i], d - 1) * g->h;
    }
  }
  return g;
}

Eigen::VectorXd laplacian_apply(const RadialGrid& g, const Eigen::VectorXd& u) {
  const int N = g.N;
  const double h = g.h;
  Eigen::VectorXd out(N);
  if (g.d == 1) {
    for (int i = 0; i < N; ++i) {
      const double ul = (i == 0) ? u[1] : u[i - 1];  // even reflection
      const double ur = (i == N - 1) ? 0.0 : u[i + 1];
      out[i] = (ul - 2.0 * u[i] + ur) / (h * h);
    }
    return out;
  }
  auto cface = [&](double rf) { return g.omega * std::pow(rf, g.d - 1) / h; };
  for (int i = 0; i < N; ++i) {
    const double cl = cface(g.r[i] - 0.5 * h);
    const double cr = cface(g.r[i] + 0.5 * h);
    const double ul = (i == 0) ? (4.0 * u[0] - u[1]) / 3.0 : u[i - 1];
    const double ur = (i == N - 1) ? 0.0 : u[i + 1];
    out[i] = (cl * (ul - u[i]) + cr * (ur - u[i])) / g.w[i];
  }
  return out;
}

namespace {

// Fornberg weights for the first derivative at x0 on the points x[0..n-1].
Eigen::VectorXd fd_weights_first(double x0, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, 2);
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        c(i, 1) = c1 * (c(i - 1, 0) - c5 * c(i - 1, 1)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      c(j, 1) = (c4 * c(j, 1) - c(j, 0)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(1);
}

}  // namespace

Eigen::VectorXd gradient_high_order(const RadialGrid& g, const Eigen::VectorXd& u) {
  const int N = g.N;
  constexpr int stencil = 7;
  // Extended uniform point set: the N nodes plus the boundary value 0 at R.
  const int M = N + 1;
  // Weights depend only on the evaluation offset within a 7-point window.
  static thread_local Eigen::MatrixXd rows;  // stencil x stencil
  if (rows.size() == 0) {
    rows.resize(stencil, stencil);
    Eigen::VectorXd x(stencil);
    for (int j = 0; j < stencil; ++j) x[j] = j;
    for (int k = 0; k < stencil; ++k) rows.row(k) = fd_weights_first(k, x).transpose();
  }
  Eigen::VectorXd out(N);
  for (int i = 0; i < N; ++i) {
    int start = i - stencil / 2;
    if (start < 0) start = 0;
    if (start > M - stencil) start = M - stencil;
    const int k = i - start;
    double acc = 0.0;
    for (int j = 0; j < stencil; ++j) {
      const int idx = start + j;
      const double uj = (idx < N) ? u[idx] : 0.0;
      acc += rows(k, j) * uj;
    }
    out[i] = acc / g.h;
  }
  return out;
}

double value_at_origin(const RadialGrid& g, const Eigen::VectorXd& u) {
  if (g.N < 4 || u.size() < 4)
    throw std::invalid_argument("grid: origin fit needs at least 4 nodes");
  if (g.d == 1) return u[0];
  // Lagrange interpolation in z = r^2 through the first four nodes,
  // evaluated at z = 0; exact for even polynomials up to degree 6.
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double zi = (i + 1.0) * (i + 1.0);
    double li = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      const double zj = (j + 1.0) * (j + 1.0);
      li *= (0.0 - zj) / (zi - zj);
    }
    acc += li * u[i];
  }
  return acc;
}

FieldPair zero_state(GridPtr grid) {
  FieldPair s;
  s.u = Eigen::VectorXd::Zero(grid->N);
  s.v = Eigen::VectorXd::Zero(grid->N);
  s.grid = std::move(grid);
  return s;
}

}  // namespace kg
