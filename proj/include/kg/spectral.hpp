#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "kg/nonlinearity.hpp"
#include "kg/operators.hpp"
#include "kg/stationary.hpp"

namespace kg {

/// Symmetric assembly of the linearized operator -Lap + 1 - f'(Q).
SymTridiag assemble_linearized(const StationaryProfile& profile,
                               const NonlinearitySpec& spec);

/// Symmetric assembly of -Lap + diag(V) for an arbitrary node potential.
SymTridiag assemble_schrodinger(GridPtr grid, const Eigen::VectorXd& V);

struct EigenvalueEstimate {
  double mu = 0.0;
  double error_estimate = 0.0;  // Richardson estimate from an h -> 2h solve
};

/// Eigenvalues strictly below `below - gap_tol`, ascending; values within
/// gap_tol of the threshold go to `near_threshold` unclassified.
struct DiscreteSpectrum {
  std::vector<EigenvalueEstimate> mu;
  std::vector<double> near_threshold;
};

DiscreteSpectrum discrete_spectrum(const SymTridiag& op, double below = 1.0,
                                   double gap_tol = 1e-3);

enum class KernelFlag { trivial, one_dimensional };

struct KernelTestResult {
  KernelFlag flag = KernelFlag::trivial;
  double defect = 0.0;  // normalized boundary defect of the decaying solution
  double min_abs_mu = 0.0;
  bool detectors_disagree = false;
  std::string note;
};

/// Kernel detection by inward integration of the half-line ODE at eigenvalue
/// zero: the exponentially decaying solution is integrated from large r and
/// the origin defect reported (u(0) for d >= 2 via the r^{(d-1)/2}
/// substitution, u'(0) in the even sector for d = 1). Declared
/// one-dimensional only when the defect and the smallest |mu| of the matrix
/// route agree; disagreement is surfaced, never silently resolved.
KernelTestResult kernel_test(const StationaryProfile& profile,
                             const NonlinearitySpec& spec);

/// Shooting route on its own, for a caller-supplied linearization potential
/// W(r) (the operator is -u'' + u + c_d u/r^2 - W(r) u).
double kernel_defect(int d, const std::function<double(double)>& W,
                     double r_start);

/// Both roots z = -alpha +/- sqrt(alpha^2 - mu) for each mu.
std::vector<std::complex<double>> a_alpha_spectrum(
    const std::vector<double>& mu, double alpha);

/// Essential spectrum of the first-order damped block operator:
/// two rays on Re z = -alpha with |Im z| >= sqrt(1 - alpha^2) for
/// 0 < alpha <= 1; the full line plus a real interval for alpha > 1.
struct EssentialSpectrum {
  double alpha = 0.0;
  double re = 0.0;       // the line / rays sit on Re z = -alpha
  double im_min = 0.0;   // rays: |Im z| >= im_min (0 means the full line)
  bool has_interval = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

EssentialSpectrum essential_spectrum_descriptor(double alpha);

struct InstabilityCertificate {
  double quad_form = 0.0;  // <L Q, Q>
  double h5f_slack = 0.0;  // int (Q^2 f'(Q) - (1+2 gamma) Q f(Q))
  double mu_min = 0.0;
  bool certified = false;
};

InstabilityCertificate instability_certificate(const StationaryProfile& profile,
                                               const NonlinearitySpec& spec);

/// inf over s >= 1 of (T0 - sin(2 T0 s)/(2 s)); strictly positive for
/// T0 > 0.
double observation_bound(double T0);

struct SpectralReport {
  double alpha = 0.0;
  std::vector<EigenvalueEstimate> mu;
  std::vector<double> near_threshold;
  KernelTestResult kernel;
  std::vector<std::complex<double>> z;
  EssentialSpectrum ess;
  int n_unstable = 0;
  int n_center = 0;
  double quad_form = 0.0;
  double h5f_slack = 0.0;
};

SpectralReport spectral_report(const StationaryProfile& profile,
                               const NonlinearitySpec& spec, double alpha);

/// Explicit 2N x 2N first-order block matrix [[0, I], [-L, -2 alpha I]] in
/// the symmetrized variables, for cross-validation of the eigenvalue map.
Eigen::MatrixXd assemble_block_system(const SymTridiag& op, double alpha);

}  // namespace kg
