#pragma once

#include <Eigen/Core>

#include "kg/grid.hpp"

namespace kg {

/// Face conductances and symmetrizing weights of the conservative radial
/// Laplacian. Face j (1-based, j = 1..N) sits between nodes j and j+1; the
/// extra inner face at r = h/2 is kept separately. The operator
///   (A u)_i = [c_{i-1/2}(u_i - u_{i-1}) + c_{i+1/2}(u_i - u_{i+1})] / w_i
/// with the origin closure u_0 = (4 u_1 - u_2)/3 folded into row 1 is exactly
/// self-adjoint in the m-weighted inner product; m agrees with the quadrature
/// weights except at node 1.
struct FluxGeometry {
  Eigen::VectorXd cface;  // size N, cface[j-1] = omega r_{j+1/2}^{d-1} / h
  double c_half = 0.0;    // omega r_{1/2}^{d-1} / h
  Eigen::VectorXd m;      // symmetrizing weights, size N
  Eigen::VectorXd sqrt_m;
};

FluxGeometry flux_geometry(const RadialGrid& g);

/// Exactly symmetric tridiagonal representation (in y = sqrt(m) .* u
/// variables) of the operator -Laplacian + diag(V).
struct SymTridiag {
  GridPtr grid;
  Eigen::VectorXd diag;  // size N
  Eigen::VectorXd sub;   // size N-1
  Eigen::VectorXd V;     // potential, kept for grid-refinement estimates
  FluxGeometry geom;

  int size() const { return static_cast<int>(diag.size()); }
  /// Applies the operator to a u-space vector.
  Eigen::VectorXd apply_u(const Eigen::VectorXd& u) const;
};

SymTridiag assemble_operator(GridPtr grid, const Eigen::VectorXd& potential);

/// All eigenvalues of a symmetric tridiagonal matrix, ascending.
Eigen::VectorXd tridiag_eigenvalues(const SymTridiag& op);

/// Full decomposition; eigenvectors are columns, orthonormal in y-space.
void tridiag_eigensystem(const SymTridiag& op, Eigen::VectorXd& values,
                         Eigen::MatrixXd& vectors);

/// Discrete Dirichlet form sum_j c_{j+1/2} (u_j - u_{j+1})^2 with
/// u_{N+1} = 0: the exact quadratic form of -Laplacian in the m-inner
/// product (the inner face drops out by the origin closure).
double grad_form(const FluxGeometry& geom, const Eigen::VectorXd& u);

/// m-weighted inner product and squared norm.
double inner_m(const FluxGeometry& geom, const Eigen::VectorXd& a,
               const Eigen::VectorXd& b);
double norm_sq_m(const FluxGeometry& geom, const Eigen::VectorXd& a);

}  // namespace kg
