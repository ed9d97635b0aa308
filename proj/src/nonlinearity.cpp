#include "kg/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

namespace {

void validate_terms(const std::vector<PowerTerm>& terms, const char* label) {
  for (const auto& t : terms) {
    if (t.coeff < 0.0)
      throw std::invalid_argument(std::string("nonlinearity: negative ") +
                                  label + " coefficient");
    if (!(t.exponent > 1.0))
      throw std::invalid_argument(std::string("nonlinearity: ") + label +
                                  " exponent must exceed 1");
  }
}

}  // namespace

NonlinearitySpec NonlinearitySpec::pure_power(double theta, int d) {
  return make({{1.0, theta}}, {}, 0.5 * (theta - 1.0), d);
}

NonlinearitySpec NonlinearitySpec::make(std::vector<PowerTerm> attract,
                                        std::vector<PowerTerm> repel,
                                        double gamma, int d) {
  validate_terms(attract, "attractive");
  validate_terms(repel, "repulsive");
  bool has_attract = false;
  double theta = 0.0;
  for (const auto& t : attract)
    if (t.coeff > 0.0) {
      has_attract = true;
      theta = std::max(theta, t.exponent);
    }
  if (!has_attract)
    throw std::invalid_argument(
        "nonlinearity: at least one attractive coefficient must be positive");
  for (const auto& q : repel)
    for (const auto& p : attract)
      if (p.coeff > 0.0 && !(q.exponent < p.exponent))
        throw std::invalid_argument(
            "nonlinearity: repulsive exponents must lie below the attractive "
            "ones");
  if (d >= 3) {
    const double crit = (d + 2.0) / (d - 2.0);
    for (const auto& p : attract)
      if (p.coeff > 0.0 && !(p.exponent < crit))
        throw std::invalid_argument(
            "nonlinearity: exponent violates subcriticality (d+2)/(d-2)");
  }
  if (!(gamma > 0.0))
    throw std::invalid_argument("nonlinearity: gamma must be positive");
  NonlinearitySpec s;
  s.attract_ = std::move(attract);
  s.repel_ = std::move(repel);
  s.gamma_ = gamma;
  s.theta_ = theta;
  // Holder exponent of f' near zero: min(1, smallest exponent - 1).
  double pmin = theta;
  for (const auto& t : s.attract_)
    if (t.coeff > 0.0) pmin = std::min(pmin, t.exponent);
  for (const auto& t : s.repel_)
    if (t.coeff > 0.0) pmin = std::min(pmin, t.exponent);
  s.beta_holder_ = std::min(1.0, pmin - 1.0);
  return s;
}

NonlinearitySpec NonlinearitySpec::linear() { return NonlinearitySpec(); }

double NonlinearitySpec::f(double y) const {
  const double a = std::abs(y);
  double acc = 0.0;
  for (const auto& t : attract_) acc += t.coeff * std::pow(a, t.exponent - 1.0);
  for (const auto& t : repel_) acc -= t.coeff * std::pow(a, t.exponent - 1.0);
  return acc * y;
}

double NonlinearitySpec::F(double y) const {
  const double a = std::abs(y);
  double acc = 0.0;
  for (const auto& t : attract_)
    acc += t.coeff * std::pow(a, t.exponent + 1.0) / (t.exponent + 1.0);
  for (const auto& t : repel_)
    acc -= t.coeff * std::pow(a, t.exponent + 1.0) / (t.exponent + 1.0);
  return acc;
}

double NonlinearitySpec::fprime(double y) const {
  const double a = std::abs(y);
  double acc = 0.0;
  for (const auto& t : attract_)
    acc += t.coeff * t.exponent * std::pow(a, t.exponent - 1.0);
  for (const auto& t : repel_)
    acc -= t.coeff * t.exponent * std::pow(a, t.exponent - 1.0);
  return acc;
}

double ar_slack(const NonlinearitySpec& spec, const Eigen::VectorXd& u,
                const RadialGrid& g) {
  double acc = 0.0;
  for (int i = 0; i < g.N; ++i)
    acc += g.w[i] * (2.0 * (1.0 + spec.gamma()) * spec.F(u[i]) -
                     u[i] * spec.f(u[i]));
  return acc;
}

}  // namespace kg
