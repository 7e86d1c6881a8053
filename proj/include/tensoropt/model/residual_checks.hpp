#pragma once

// Test-mode verification of the Taylor-residual bounds of an inexact model
// against exact derivatives of the underlying problem.

#include "tensoropt/model/bundle.hpp"
#include "tensoropt/model/models.hpp"
#include "tensoropt/model/radial.hpp"
#include "tensoropt/oracles/problem.hpp"
#include "tensoropt/tensor/norms.hpp"

#include <cmath>

namespace tensoropt {

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

struct ResidualReport {
  InequalityCheck value;     // |f(x+s) − φ(s)|
  InequalityCheck gradient;  // ‖∇f(x+s) − ∇φ(s)‖
  InequalityCheck hessian;   // ‖∇²f(x+s) − ∇²φ(s)‖
  bool all() const { return value.holds && gradient.holds && hessian.holds; }
};

namespace detail {
inline InequalityCheck make_check(double lhs, double rhs, double slack) {
  return {lhs, rhs, lhs <= rhs + slack};
}
}  // namespace detail

/// Residuals of φ against f at x + s, with right-hand sides
///   Σ_{i=1}^p κ_i ε^{(p-i+1)/p} ‖s‖^i / i!       + L_p ‖s‖^{p+1}/(p+1)!
///   Σ_{i=1}^p κ_i ε^{(p-i+1)/p} ‖s‖^{i-1}/(i-1)! + L_p ‖s‖^p / p!
///   Σ_{i=2}^p κ_i ε^{(p-i+1)/p} ‖s‖^{i-2}/(i-2)! + L_p ‖s‖^{p-1}/(p-1)!
inline ResidualReport check_residual_bounds(const Problem& prob, const DerivativeBundle& bundle,
                                            const InexactnessBudget& budget, double lp, const Vector& s,
                                            double slack = 1e-8) {
  bundle.validate();
  const int p = bundle.order;
  budget.validate(p);
  const Vector xs = bundle.center + s;
  const double r = s.norm();

  double rhs0 = lp * std::pow(r, p + 1) / factorial(p + 1);
  double rhs1 = lp * std::pow(r, p) / factorial(p);
  double rhs2 = lp * std::pow(r, p - 1) / factorial(p - 1);
  for (int i = 1; i <= p; ++i) {
    const double k = budget.kappa_at(i) * std::pow(budget.eps, static_cast<double>(p - i + 1) / p);
    rhs0 += k * std::pow(r, i) / factorial(i);
    rhs1 += k * std::pow(r, i - 1) / factorial(i - 1);
    if (i >= 2) rhs2 += k * std::pow(r, i - 2) / factorial(i - 2);
  }

  ResidualReport rep;
  rep.value = detail::make_check(std::abs(prob.value(xs) - phi_eval(bundle, s)), rhs0, slack);
  rep.gradient = detail::make_check((prob.gradient(xs) - phi_grad(bundle, s)).norm(), rhs1, slack);
  const Matrix dh = prob.hessian(xs) - phi_hess(bundle, s);
  rep.hessian = detail::make_check(opnorm_mat(0.5 * (dh + dh.transpose())), rhs2, slack);
  return rep;
}

struct HessianSandwichReport {
  double min_eig_hessian = 0.0;  // λ_min(∇²f(x+s)), must be >= −tol
  double max_eig_excess = 0.0;   // λ_max(∇²f(x+s) − upper), must be <= tol
  bool holds = true;
};

/// 0 ⪯ ∇²f(x+s) ⪯ ∇²φ(s) + (Σ_{i>=2} κ_i ε^{(p-i+1)/p} ‖s‖^{i-2}/(i-2)! + L_p ‖s‖^{p-1}/(p-1)!) I.
inline HessianSandwichReport check_hessian_sandwich(const Problem& prob, const DerivativeBundle& bundle,
                                                    const InexactnessBudget& budget, const ModelConfig& cfg,
                                                    const Vector& s, double tol = 1e-8) {
  bundle.validate();
  check_model_order(bundle, cfg);
  const int p = cfg.p;
  budget.validate(p);
  const double r = s.norm();
  double shift = cfg.lp * std::pow(r, p - 1) / factorial(p - 1);
  for (int i = 2; i <= p; ++i) {
    shift += budget.kappa_at(i) * std::pow(budget.eps, static_cast<double>(p - i + 1) / p) *
             std::pow(r, i - 2) / factorial(i - 2);
  }
  const Matrix h = prob.hessian(bundle.center + s);
  Matrix excess = h - phi_hess(bundle, s);
  excess.diagonal().array() -= shift;
  excess = (0.5 * (excess + excess.transpose())).eval();

  HessianSandwichReport rep;
  Eigen::SelfAdjointEigenSolver<Matrix> e1(h, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> e2(excess, Eigen::EigenvaluesOnly);
  rep.min_eig_hessian = e1.eigenvalues()(0);
  rep.max_eig_excess = e2.eigenvalues()(e2.eigenvalues().size() - 1);
  rep.holds = rep.min_eig_hessian >= -tol && rep.max_eig_excess <= tol;
  return rep;
}

}  // namespace tensoropt
