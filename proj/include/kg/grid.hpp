#pragma once

#include <Eigen/Core>
#include <memory>

namespace kg {

/// Discretized radial domain [0, R] in dimension d.
///
/// For d >= 2: interior nodes r_i = i*h, i = 1..N with h = R/(N+1), and
/// quadrature weights w_i = omega_d r_i^{d-1} h (omega_d the unit-sphere
/// surface measure). For d = 1 the origin is a regular point of the even
/// sector, so it sits on the grid: r_i = i*h, i = 0..N-1 with h = R/N and
/// trapezoid weights (h, 2h, ..., 2h) counting both half-lines. Either way
/// the value at r = R is pinned to zero (Dirichlet) and the origin is closed
/// by even extension (zero radial derivative).
struct RadialGrid {
  int d = 1;
  double R = 0.0;
  int N = 0;
  double h = 0.0;
  double omega = 0.0;
  Eigen::VectorXd r;  // node radii, size N
  Eigen::VectorXd w;  // quadrature weights, size N
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Surface measure of the unit sphere in R^d (2 for d = 1).
double sphere_surface(int d);

/// Builds a grid. Throws std::invalid_argument unless 1 <= d <= 6, R > 0,
/// N >= 16.
GridPtr build_grid(int d, double R, int N);

/// Second-order finite-difference radial Laplacian u'' + ((d-1)/r) u' in
/// conservative form, with even closure at the origin and Dirichlet closure
/// at r = R. Approximately self-adjoint in the w-weighted inner product.
Eigen::VectorXd laplacian_apply(const RadialGrid& g, const Eigen::VectorXd& u);

/// Sixth-order finite-difference radial derivative du/dr at the nodes.
/// Uses shifted 7-point stencils near both ends; the Dirichlet value at r = R
/// enters as a known zero.
Eigen::VectorXd gradient_high_order(const RadialGrid& g, const Eigen::VectorXd& u);

/// Value at r = 0: the first node value when the origin is on the grid
/// (d = 1), otherwise an even-symmetric polynomial fit through the first
/// four nodes (exact for even polynomials up to degree 6).
double value_at_origin(const RadialGrid& g, const Eigen::VectorXd& u);

/// A state (u, du/dt) of the damped wave dynamics on a radial grid.
struct FieldPair {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  GridPtr grid;
};

FieldPair zero_state(GridPtr grid);

}  // namespace kg
