#include "kg/manifold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kg {

namespace {

void check_parameters(double C1, double C2, double beta1, double beta2,
                      double lipR) {
  if (!(C1 >= 1.0) || !(C2 >= 1.0))
    throw std::invalid_argument("gap: constants C1, C2 must be >= 1");
  if (!(beta2 >= 0.0) || !(beta1 > beta2))
    throw std::invalid_argument("gap: rates must satisfy 0 <= beta2 < beta1");
  if (!(lipR >= 0.0))
    throw std::invalid_argument("gap: Lipschitz constant must be >= 0");
}

// Golden-section minimum of fn on [a, b] after a coarse scan; relative
// tolerance 1e-10 on the argument.
template <typename Fn>
double bracketed_min(Fn fn, double a, double b) {
  const int n = 400;
  double best_x = a, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    const double v = fn(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double lo = std::max(a, best_x - (b - a) / n);
  double hi = std::min(b, best_x + (b - a) / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  while (hi - lo > 1e-10 * (1.0 + std::abs(hi))) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = fn(x2);
    }
  }
  return std::min({best, f1, f2});
}

double condition_value_of(double C1, double C2, double beta1, double beta2,
                          double lipR) {
  const double s = std::sqrt(C1) + std::sqrt(C2);
  return s * s / (beta1 - beta2) * lipR;
}

}  // namespace

double lambda_gamma(double C1, double C2, double beta1, double beta2,
                    double gamma) {
  if (!(gamma > beta2 && gamma < beta1))
    throw std::domain_error("gap: gamma must lie strictly in (beta2, beta1)");
  return C1 / (beta1 - gamma) + C2 / (gamma - beta2);
}

std::pair<double, double> gamma_roots(double C1, double C2, double beta1,
                                      double beta2, double lipR) {
  check_parameters(C1, C2, beta1, beta2, lipR);
  if (lipR == 0.0) return {beta1, beta2};
  if (!(condition_value_of(C1, C2, beta1, beta2, lipR) < 1.0))
    throw std::domain_error("gap: condition fails, roots undefined");
  // lambda(gamma)*lipR = 1 is the quadratic
  //   gamma^2 + B gamma + C = 0,
  //   B = -(beta1 + beta2) + lipR (C1 - C2),
  //   C = beta1 beta2 + lipR (C2 beta1 - C1 beta2).
  const double B = -(beta1 + beta2) + lipR * (C1 - C2);
  const double C = beta1 * beta2 + lipR * (C2 * beta1 - C1 * beta2);
  const double disc = B * B - 4.0 * C;
  if (!(disc > 0.0))
    throw std::domain_error("gap: quadratic has no real roots");
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  double g1 = std::max(q, C / q);
  double g2 = std::min(q, C / q);
  // Newton polish on rho(g) = lambda(g)*lipR - 1 to the 1e-12 residual
  // contract.
  auto polish = [&](double g) {
    for (int it = 0; it < 50; ++it) {
      const double rho = lambda_gamma(C1, C2, beta1, beta2, g) * lipR - 1.0;
      if (std::abs(rho) < 1e-13) break;
      const double drho = (C1 / ((beta1 - g) * (beta1 - g)) -
                           C2 / ((g - beta2) * (g - beta2))) *
                          lipR;
      const double step = rho / drho;
      const double gn = g - step;
      if (!(gn > beta2 && gn < beta1)) break;
      g = gn;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(g))) break;
    }
    return g;
  };
  return {polish(g1), polish(g2)};
}

GapConditionReport gap_condition(double C1, double C2, double beta1,
                                 double beta2, double lipR) {
  check_parameters(C1, C2, beta1, beta2, lipR);
  GapConditionReport rep;
  rep.C1 = C1;
  rep.C2 = C2;
  rep.beta1 = beta1;
  rep.beta2 = beta2;
  rep.lipR = lipR;
  rep.condition_value = condition_value_of(C1, C2, beta1, beta2, lipR);
  rep.holds = rep.condition_value < 1.0;
  if (rep.holds) {
    std::tie(rep.gamma1, rep.gamma2) = gamma_roots(C1, C2, beta1, beta2, lipR);
    rep.lipg_bound = lipg_bound(C1, C2, beta1, beta2, lipR);
  }
  return rep;
}

double lipg_bound(double C1, double C2, double beta1, double beta2,
                  double lipR) {
  check_parameters(C1, C2, beta1, beta2, lipR);
  if (lipR == 0.0) return 0.0;
  const auto [g1, g2] = gamma_roots(C1, C2, beta1, beta2, lipR);
  auto fn = [&](double g) {
    const double denom =
        beta1 * (g - beta2) *
        (1.0 - lambda_gamma(C1, C2, beta1, beta2, g) * lipR);
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return C1 * C2 * lipR * g / denom;
  };
  return bracketed_min(fn, g2, g1);
}

CompoundGapResult compound_gap_condition(double C1, double C2, double eta,
                                         double eps, double lipR,
                                         double lipRt) {
  if (!(eta > eps) || !(eps > 0.0))
    throw std::invalid_argument("gap: need 0 < eps < eta");
  CompoundGapResult res;
  const double b1f = 1.0 - eps, b2f = 1.0 - eta;
  // Backward factor: the inverted map swaps the roles of the two spectral
  // parts, so the rates become the reciprocals and C1, C2 trade places.
  const double b1b = 1.0 / (1.0 + eps), b2b = 1.0 / (1.0 + eta);

  if (lipR == 0.0) {
    res.forward = 0.0;
  } else if (condition_value_of(C1, C2, b1f, b2f, lipR) < 1.0) {
    res.forward = lipg_bound(C1, C2, b1f, b2f, lipR);
  } else {
    res.forward = std::numeric_limits<double>::infinity();
  }

  if (lipRt == 0.0) {
    res.backward = 0.0;
  } else if (condition_value_of(C2, C1, b1b, b2b, lipRt) < 1.0) {
    const auto [gt_hi, gt_lo] = gamma_roots(C2, C1, b1b, b2b, lipRt);
    auto fn = [&](double g) {
      const double denom = (1.0 + eta - 1.0 / g) *
                           (1.0 - lambda_gamma(C2, C1, b1b, b2b, g) * lipRt);
      if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
      return C1 * C2 * lipRt * (1.0 + eps) * (1.0 + eta) / denom;
    };
    res.backward = bracketed_min(fn, gt_lo, gt_hi);
  } else {
    res.backward = std::numeric_limits<double>::infinity();
  }

  res.product = res.forward * res.backward;
  res.holds = res.product < 1.0;
  return res;
}

ManifoldDims manifold_dimensions(const SpectralReport& report) {
  ManifoldDims dims;
  for (const auto& e : report.mu)
    if (e.mu < 0.0) ++dims.dim_u;
  dims.dim_c = report.kernel.flag == KernelFlag::one_dimensional ? 1 : 0;
  return dims;
}

}  // namespace kg
