#pragma once

// Closed-form calculators from the convergence analysis of the inexact
// tensor method: default tolerances, iteration budget, residual bound.

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/radial.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace tensoropt {

namespace detail {
inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive and finite");
}
}  // namespace detail

/// κ_i = L^{(i-1)/p} · i! / D^{(p-i+1)/p},  i = 1..p.
inline std::vector<double> kappa_defaults(double lp, double diameter, int p) {
  detail::require_positive(lp, "kappa_defaults: L_p");
  detail::require_positive(diameter, "kappa_defaults: D");
  if (p < 1) throw InvalidArgument("kappa_defaults: p must be >= 1");
  std::vector<double> k;
  for (int i = 1; i <= p; ++i) {
    k.push_back(std::pow(lp, static_cast<double>(i - 1) / p) * factorial(i) /
                std::pow(diameter, static_cast<double>(p - i + 1) / p));
  }
  return k;
}

/// Real solution T of (T + p + 1)^p = ((p+1)^{p+2}/(p+1)!) · ((L + pσ)/ε) · D^{p+1}.
inline double iteration_budget_real(double eps, double lp, double sigma, double diameter, int p) {
  if (p < 2) throw InvalidArgument("iteration_budget: p must be >= 2");
  detail::require_positive(eps, "iteration_budget: eps");
  detail::require_positive(diameter, "iteration_budget: D");
  if (!(lp >= 0.0) || !(sigma >= 0.0) || !(lp + sigma > 0.0)) {
    throw InvalidArgument("iteration_budget: L_p, sigma must be >= 0, not both 0");
  }
  const double c = std::pow(p + 1.0, p + 2) / factorial(p + 1);
  const double rhs = c * (lp + p * sigma) / eps * std::pow(diameter, p + 1);
  return std::pow(rhs, 1.0 / p) - p - 1.0;
}

/// Ceiling of the real budget, floored at 0.
inline std::int64_t iteration_budget(double eps, double lp, double sigma, double diameter, int p) {
  const double t = iteration_budget_real(eps, lp, sigma, diameter, p);
  return t <= 0.0 ? 0 : static_cast<std::int64_t>(std::ceil(t));
}

/// 2 Σ_i κ_i ε^{(p-i+1)/p} (D^i/i!) (p+1)^i/(t+p+1)^{i-1}
///   + ((L + pσ)/(p+1)!) (p+1)^{p+1}/(t+p+1)^p D^{p+1}.
inline double theoretical_residual_bound(double t, const std::vector<double>& kappa, double eps, double diameter,
                                         double lp, double sigma, int p) {
  if (!(t >= 0.0)) throw InvalidArgument("theoretical_residual_bound: t must be >= 0");
  if (static_cast<int>(kappa.size()) != p) throw InvalidArgument("theoretical_residual_bound: need p tolerances");
  detail::require_positive(eps, "theoretical_residual_bound: eps");
  detail::require_positive(diameter, "theoretical_residual_bound: D");
  const double base = t + p + 1.0;
  double sum = 0.0;
  for (int i = 1; i <= p; ++i) {
    sum += kappa[static_cast<std::size_t>(i - 1)] * std::pow(eps, static_cast<double>(p - i + 1) / p) *
           std::pow(diameter, i) / factorial(i) * std::pow(p + 1.0, i) / std::pow(base, i - 1);
  }
  return 2.0 * sum + (lp + p * sigma) / factorial(p + 1) * std::pow(p + 1.0, p + 1) / std::pow(base, p) *
                         std::pow(diameter, p + 1);
}

/// α_t = (p+1)/(t+p+1), the averaging weights of the rate proof.
inline double alpha_t(double t, int p) { return (p + 1.0) / (t + p + 1.0); }

}  // namespace tensoropt
