#include "kg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kg/functionals.hpp"

namespace kg {

SymTridiag assemble_linearized(const StationaryProfile& profile,
                               const NonlinearitySpec& spec) {
  const int N = profile.grid->N;
  Eigen::VectorXd V(N);
  for (int i = 0; i < N; ++i) V[i] = 1.0 - spec.fprime(profile.Q[i]);
  return assemble_operator(profile.grid, V);
}

SymTridiag assemble_schrodinger(GridPtr grid, const Eigen::VectorXd& V) {
  return assemble_operator(std::move(grid), V);
}

DiscreteSpectrum discrete_spectrum(const SymTridiag& op, double below,
                                   double gap_tol) {
  DiscreteSpectrum out;
  const Eigen::VectorXd mu_f = tridiag_eigenvalues(op);
  // Coarse companion grid (spacing ~2h) for a Richardson error estimate.
  const RadialGrid& g = *op.grid;
  const int Nc = (g.N - 1) / 2;
  Eigen::VectorXd mu_c;
  if (Nc >= 16) {
    GridPtr coarse = build_grid(g.d, g.R, Nc);
    // Interpolate the potential onto the coarse nodes (quartic error,
    // negligible against the second-order eigenvalue error).
    std::vector<double> vals;
    if (g.d == 1) {
      vals.resize(g.N + 1);
      for (int i = 0; i < g.N; ++i) vals[i] = op.V[i];
      vals[g.N] = op.V[g.N - 1];  // flat extension at R
    } else {
      vals.resize(g.N + 2);
      vals[0] = value_at_origin(g, op.V);
      for (int i = 0; i < g.N; ++i) vals[i + 1] = op.V[i];
      vals[g.N + 1] = op.V[g.N - 1];  // flat extension at R
    }
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline(
        vals.data(), vals.size(), 0.0, g.h);
    Eigen::VectorXd Vc(Nc);
    for (int i = 0; i < Nc; ++i) Vc[i] = spline(coarse->r[i]);
    mu_c = tridiag_eigenvalues(assemble_operator(coarse, Vc));
  }
  int kc = 0;
  for (int k = 0; k < mu_f.size(); ++k) {
    const double mu = mu_f[k];
    if (mu >= below + gap_tol) break;
    if (mu > below - gap_tol) {
      out.near_threshold.push_back(mu);
      continue;
    }
    EigenvalueEstimate est;
    est.mu = mu;
    if (mu_c.size() > kc) {
      // Second-order scheme: error(h) ~ (mu(2h) - mu(h)) / 3.
      est.error_estimate = std::abs(mu_c[kc] - mu) / 3.0;
    } else {
      est.error_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    ++kc;
    out.mu.push_back(est);
  }
  return out;
}

namespace {

using State2 = std::array<double, 2>;

// Integrates -u'' - ((d-1)/r) u' + (1 - W(r)) u = 0 at eigenvalue zero.
struct ModeRhs {
  const std::function<double(double)>* W;
  int d;
  void operator()(const State2& y, State2& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -((d - 1) / r) * y[1] + (1.0 - (*W)(r)) * y[0];
  }
};

State2 integrate_to(const ModeRhs& rhs, State2 y, double r_from, double r_to) {
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-12, 1e-12,
                                      ode::runge_kutta_dopri5<State2>());
  double r = r_from;
  double dr = (r_to > r_from ? 1.0 : -1.0) * 1e-3;
  while ((r_to - r) * dr > 0.0) {
    if (std::abs(dr) > std::abs(r_to - r)) dr = r_to - r;
    double rtry = r;
    State2 ytry = y;
    int fails = 0;
    while (ode::fail == stepper.try_step(rhs, ytry, rtry, dr))
      if (++fails > 60)
        throw std::runtime_error("spectral: mode integration failed");
    y = ytry;
    r = rtry;
    // Renormalize to keep the pair in range; only the direction matters.
    const double a = std::abs(y[0]) + std::abs(y[1]);
    if (a > 1e6) {
      y[0] /= a;
      y[1] /= a;
    }
  }
  return y;
}

}  // namespace

double kernel_defect(int d, const std::function<double(double)>& W,
                     double r_start) {
  ModeRhs rhs{&W, d};
  const double r_mid = 0.35 * r_start;
  // Regular branch from the origin: u(0) = 1, u'(0) = 0 with the even series
  // u ~ 1 + (1 - W(0)) r^2 / (2d).
  const double r0 = 1e-4;
  const double curv = (1.0 - W(0.0)) / (2.0 * d);
  State2 yout = integrate_to(rhs, {1.0 + curv * r0 * r0, 2.0 * curv * r0}, r0,
                             r_mid);
  // Decaying branch from the far field: u ~ r^{-(d-1)/2} e^{-r}.
  const double k = 0.5 * (d - 1);
  State2 yin = integrate_to(rhs, {1.0, -(1.0 + k / r_start)}, r_start, r_mid);
  const double w = yout[0] * yin[1] - yout[1] * yin[0];
  const double scale = (std::abs(yout[0]) + std::abs(yout[1])) *
                       (std::abs(yin[0]) + std::abs(yin[1]));
  return std::abs(w) / scale;
}

KernelTestResult kernel_test(const StationaryProfile& profile,
                             const NonlinearitySpec& spec) {
  KernelTestResult res;
  const auto interp = profile_interpolant(profile);
  std::function<double(double)> W = [interp, &spec](double r) {
    return spec.fprime(interp(r));
  };
  const double r_start = 0.8 * profile.grid->R;
  res.defect = kernel_defect(profile.grid->d, W, r_start);

  const SymTridiag op = assemble_linearized(profile, spec);
  const Eigen::VectorXd mu = tridiag_eigenvalues(op);
  res.min_abs_mu = mu.cwiseAbs().minCoeff();

  const double shoot_tol = 1e-3;
  const double matrix_tol = 1e-2;
  const bool shoot_says = res.defect < shoot_tol;
  const bool matrix_says = res.min_abs_mu < matrix_tol;
  if (shoot_says != matrix_says) {
    res.detectors_disagree = true;
    res.flag = KernelFlag::trivial;
    res.note = "shooting defect and matrix spectrum disagree near zero";
  } else {
    res.flag = shoot_says ? KernelFlag::one_dimensional : KernelFlag::trivial;
  }
  return res;
}

std::vector<std::complex<double>> a_alpha_spectrum(
    const std::vector<double>& mu, double alpha) {
  std::vector<std::complex<double>> out;
  out.reserve(2 * mu.size());
  for (double m : mu) {
    const std::complex<double> root =
        std::sqrt(std::complex<double>(alpha * alpha - m, 0.0));
    out.push_back(-alpha + root);
    out.push_back(-alpha - root);
  }
  return out;
}

EssentialSpectrum essential_spectrum_descriptor(double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("spectral: alpha must be positive");
  EssentialSpectrum e;
  e.alpha = alpha;
  e.re = -alpha;
  if (alpha <= 1.0) {
    e.im_min = std::sqrt(1.0 - alpha * alpha);
  } else {
    e.im_min = 0.0;
    e.has_interval = true;
    const double s = std::sqrt(alpha * alpha - 1.0);
    e.interval_lo = -alpha - s;
    e.interval_hi = -alpha + s;
  }
  return e;
}

InstabilityCertificate instability_certificate(
    const StationaryProfile& profile, const NonlinearitySpec& spec) {
  InstabilityCertificate cert;
  const RadialGrid& g = *profile.grid;
  const Eigen::VectorXd du = gradient_high_order(g, profile.Q);
  Eigen::VectorXd q(g.N), slack(g.N);
  const double two_gamma = 1.0 + 2.0 * spec.gamma();
  for (int i = 0; i < g.N; ++i) {
    const double u = profile.Q[i];
    q[i] = du[i] * du[i] + u * u - spec.fprime(u) * u * u;
    slack[i] = u * u * spec.fprime(u) - two_gamma * u * spec.f(u);
  }
  cert.quad_form = g.w.dot(q);
  cert.h5f_slack = g.w.dot(slack);
  const SymTridiag op = assemble_linearized(profile, spec);
  cert.mu_min = tridiag_eigenvalues(op)[0];
  cert.certified = cert.mu_min < 0.0 && cert.quad_form < 0.0;
  return cert;
}

double observation_bound(double T0) {
  if (!(T0 > 0.0))
    throw std::invalid_argument("spectral: T0 must be positive");
  auto g = [T0](double s) { return T0 - std::sin(2.0 * T0 * s) / (2.0 * s); };
  // The s >= 1 tail contributes at most 1/(2s), so the infimum lives in a
  // bounded window; scan it, then refine the best bracket by golden section.
  const double s_hi = std::max(200.0, 40.0 * T0);
  const int n = 200000;
  double best_s = 1.0, best = g(1.0);
  for (int i = 0; i <= n; ++i) {
    const double s = 1.0 + (s_hi - 1.0) * i / n;
    const double v = g(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  double a = std::max(1.0, best_s - (s_hi - 1.0) / n);
  double b = best_s + (s_hi - 1.0) / n;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > 1e-14 * (1.0 + b)) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = g(x2);
    }
  }
  return std::min({best, f1, f2, g(1.0)});
}

SpectralReport spectral_report(const StationaryProfile& profile,
                               const NonlinearitySpec& spec, double alpha) {
  SpectralReport rep;
  rep.alpha = alpha;
  const SymTridiag op = assemble_linearized(profile, spec);
  const DiscreteSpectrum ds = discrete_spectrum(op);
  rep.mu = ds.mu;
  rep.near_threshold = ds.near_threshold;
  rep.kernel = kernel_test(profile, spec);
  std::vector<double> mu_vals;
  for (const auto& e : rep.mu) mu_vals.push_back(e.mu);
  rep.z = a_alpha_spectrum(mu_vals, alpha);
  rep.ess = essential_spectrum_descriptor(alpha);
  for (double m : mu_vals) {
    if (m < 0.0) ++rep.n_unstable;
  }
  rep.n_center = rep.kernel.flag == KernelFlag::one_dimensional ? 1 : 0;
  const InstabilityCertificate cert = instability_certificate(profile, spec);
  rep.quad_form = cert.quad_form;
  rep.h5f_slack = cert.h5f_slack;
  return rep;
}

Eigen::MatrixXd assemble_block_system(const SymTridiag& op, double alpha) {
  const int N = op.size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    T(i, i) = op.diag[i];
    if (i + 1 < N) {
      T(i, i + 1) = op.sub[i];
      T(i + 1, i) = op.sub[i];
    }
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  A.topRightCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
  A.bottomLeftCorner(N, N) = -T;
  A.bottomRightCorner(N, N) = -2.0 * alpha * Eigen::MatrixXd::Identity(N, N);
  return A;
}

}  // namespace kg
