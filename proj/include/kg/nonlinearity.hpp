#pragma once

#include <vector>

#include "kg/grid.hpp"

namespace kg {

struct PowerTerm {
  double coeff = 0.0;     // a_i or b_j, nonnegative
  double exponent = 0.0;  // p_i or q_j, > 1
};

/// Odd nonlinearity f(y) = sum a_i |y|^{p_i-1} y - sum b_j |y|^{q_j-1} y,
/// with primitive F and derivative f'. Carries the superquadraticity
/// constant gamma and the dominant exponent theta.
class NonlinearitySpec {
 public:
  /// Pure attractive power |y|^{theta-1} y with gamma = (theta - 1) / 2.
  static NonlinearitySpec pure_power(double theta, int d);

  /// General sum/difference of powers. Validates 1 < q_j < p_i for all i, j,
  /// subcriticality p_i < (d+2)/(d-2) when d >= 3, and that at least one
  /// attractive coefficient is positive.
  static NonlinearitySpec make(std::vector<PowerTerm> attract,
                               std::vector<PowerTerm> repel, double gamma,
                               int d);

  /// f identically zero (linear dynamics).
  static NonlinearitySpec linear();

  double f(double y) const;
  double F(double y) const;
  double fprime(double y) const;

  bool is_zero() const { return attract_.empty() && repel_.empty(); }

  const std::vector<PowerTerm>& attract() const { return attract_; }
  const std::vector<PowerTerm>& repel() const { return repel_; }
  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  double beta_holder() const { return beta_holder_; }

 private:
  NonlinearitySpec() = default;

  std::vector<PowerTerm> attract_;
  std::vector<PowerTerm> repel_;
  double gamma_ = 0.0;
  double theta_ = 0.0;
  double beta_holder_ = 0.0;
};

/// Quadrature of 2(1+gamma) F(u) - u f(u) over the ball. The
/// superquadraticity hypothesis holds on this field iff the value is <= 0;
/// identically zero for a pure power with gamma = (theta-1)/2.
double ar_slack(const NonlinearitySpec& spec, const Eigen::VectorXd& u,
                const RadialGrid& g);

}  // namespace kg
