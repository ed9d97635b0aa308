#include "kg/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace kg {

FluxGeometry flux_geometry(const RadialGrid& g) {
  FluxGeometry geom;
  const int N = g.N;
  geom.cface.resize(N);
  for (int j = 0; j < N; ++j) {
    const double rf = g.r[j] + 0.5 * g.h;
    geom.cface[j] = g.omega * std::pow(rf, g.d - 1) / g.h;
  }
  geom.c_half = g.omega * std::pow(0.5 * g.h, g.d - 1) / g.h;
  geom.m = g.w;
  if (g.d >= 2) {
    // Folding the origin closure u_0 = (4u_1 - u_2)/3 into row 1 turns its
    // couplings into (cface_1 - c_half/3)(u_1 - u_2); rescaling m_1 restores
    // exact symmetry against row 2's plain cface_1 coupling.
    const double ceff = geom.cface[0] - geom.c_half / 3.0;
    geom.m[0] = g.w[0] * geom.cface[0] / ceff;
  }
  geom.sqrt_m = geom.m.cwiseSqrt();
  return geom;
}

SymTridiag assemble_operator(GridPtr grid, const Eigen::VectorXd& potential) {
  if (potential.size() != grid->N)
    throw std::invalid_argument("operator: potential size mismatch");
  SymTridiag op;
  op.grid = grid;
  op.V = potential;
  op.geom = flux_geometry(*grid);
  const int N = grid->N;
  op.diag.resize(N);
  op.sub.resize(N - 1);
  const auto& c = op.geom.cface;
  const auto& m = op.geom.m;
  for (int i = 0; i < N; ++i) {
    const double left = (i == 0) ? 0.0 : c[i - 1];
    op.diag[i] = (left + c[i]) / m[i] + potential[i];
  }
  for (int i = 0; i + 1 < N; ++i) op.sub[i] = -c[i] / std::sqrt(m[i] * m[i + 1]);
  return op;
}

Eigen::VectorXd SymTridiag::apply_u(const Eigen::VectorXd& u) const {
  const int N = size();
  Eigen::VectorXd y = geom.sqrt_m.cwiseProduct(u);
  Eigen::VectorXd out(N);
  for (int i = 0; i < N; ++i) {
    double acc = diag[i] * y[i];
    if (i > 0) acc += sub[i - 1] * y[i - 1];
    if (i + 1 < N) acc += sub[i] * y[i + 1];
    out[i] = acc;
  }
  return out.cwiseQuotient(geom.sqrt_m);
}

Eigen::VectorXd tridiag_eigenvalues(const SymTridiag& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(op.diag, op.sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void tridiag_eigensystem(const SymTridiag& op, Eigen::VectorXd& values,
                         Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(op.diag, op.sub, Eigen::ComputeEigenvectors);
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

double grad_form(const FluxGeometry& geom, const Eigen::VectorXd& u) {
  const int N = static_cast<int>(u.size());
  double acc = 0.0;
  for (int j = 0; j + 1 < N; ++j) {
    const double du = u[j] - u[j + 1];
    acc += geom.cface[j] * du * du;
  }
  acc += geom.cface[N - 1] * u[N - 1] * u[N - 1];
  return acc;
}

double inner_m(const FluxGeometry& geom, const Eigen::VectorXd& a,
               const Eigen::VectorXd& b) {
  return a.cwiseProduct(b).dot(geom.m);
}

double norm_sq_m(const FluxGeometry& geom, const Eigen::VectorXd& a) {
  return inner_m(geom, a, a);
}

}  // namespace kg
