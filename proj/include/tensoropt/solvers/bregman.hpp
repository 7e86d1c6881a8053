#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/model/models.hpp"
#include "tensoropt/model/radial.hpp"
#include "tensoropt/solvers/quartic.hpp"

#include <cmath>
#include <vector>

namespace tensoropt {

struct SubsolverConfig {
  double tau = 4.0;
  double grad_tol = 1e-9;  // relative to max(1, ‖∇ζ(0)‖)
  int max_inner = 200;

  void validate() const {
    if (!(tau > 2.0)) throw InvalidArgument("SubsolverConfig: tau must be > 2");
    if (!(grad_tol > 0.0)) throw InvalidArgument("SubsolverConfig: grad_tol must be > 0");
    if (max_inner < 1) throw InvalidArgument("SubsolverConfig: max_inner must be >= 1");
  }
};

inline double relative_smoothness_constant(double tau) {
  if (!(tau > 2.0)) throw InvalidArgument("relative_smoothness_constant: tau must be > 2");
  return (tau + 2.0) / (tau - 2.0);
}

/// ρ(h) = (β/2) hᵀBh + (a/2)‖h‖² + (b/4)‖h‖⁴, the reference function of the
/// p = 3 inner loop. For a ζ with only ‖h‖² and ‖h‖⁴ penalty terms:
///   β = 1 − 2/τ,  a = (1 − 2/τ)·C₂,  b = C₄ − (τ/2)(L₃ + 1.5κ₃)
/// where C₂, C₄ are the coefficients of ‖h‖²/2 and ‖h‖⁴/4 in the ζ-penalty.
class ReferenceFunction {
 public:
  ReferenceFunction(const DerivativeBundle& bundle, const RadialPenalty& zeta_pen, double l3, double kappa3,
                    double tau)
      : b_mat_(&bundle.b) {
    if (!(tau > 2.0)) throw InvalidArgument("ReferenceFunction: tau must be > 2");
    for (const auto& [k, c] : zeta_pen.coef) {
      if (c != 0.0 && k != 2 && k != 4) throw InvalidArgument("ReferenceFunction: ζ-penalty must be quadratic + quartic");
    }
    const double c2 = 2.0 * zeta_pen.coefficient(2);
    const double c4 = 4.0 * zeta_pen.coefficient(4);
    beta_ = 1.0 - 2.0 / tau;
    a_ = beta_ * c2;
    b_ = c4 - 0.5 * tau * (l3 + 1.5 * kappa3);
    if (!(b_ > 0.0)) throw InvalidArgument("ReferenceFunction: quartic coefficient not positive (σ too small for τ)");
  }

  double beta() const { return beta_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Matrix& matrix() const { return *b_mat_; }

  double value(const Vector& h) const {
    const double r2 = h.squaredNorm();
    return 0.5 * beta_ * h.dot(*b_mat_ * h) + 0.5 * a_ * r2 + 0.25 * b_ * r2 * r2;
  }
  Vector grad(const Vector& h) const { return beta_ * (*b_mat_ * h) + (a_ + b_ * h.squaredNorm()) * h; }
  Matrix hess(const Vector& h) const {
    Matrix m = beta_ * *b_mat_ + 2.0 * b_ * (h * h.transpose());
    m.diagonal().array() += a_ + b_ * h.squaredNorm();
    return m;
  }
  double divergence(const Vector& u, const Vector& v) const { return value(v) - value(u) - grad(u).dot(v - u); }

 private:
  const Matrix* b_mat_;
  double beta_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Model config for the p = 3 Bregman path: σ from the τ coupling.
inline ModelConfig coupled_model_config(const ModelConfig& cfg, const InexactnessBudget& budget, double tau) {
  ModelConfig out = cfg;
  out.tau = tau;
  out.sigma = coupled_sigma(tau, cfg.lp, budget.kappa_at(3));
  return out;
}

inline ReferenceFunction reference_function(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                            const ModelConfig& cfg) {
  return ReferenceFunction(bundle, zeta_penalty(budget, cfg), cfg.lp, budget.kappa_at(3), cfg.tau);
}

struct SubsolverResult {
  Vector s;
  int iterations = 0;
  double grad_norm = 0.0;
  double shift = 0.0;                 // largest spectral shift used by the quartic solver
  std::vector<double> model_values;   // ζ(h_k) − f(x), k = 0..iterations
};

/// Indices k where values[k] > values[k-1] + slack·max(1, |values[k-1]|).
/// The default slack absorbs rounding in model evaluation near convergence.
inline std::vector<std::size_t> increase_violations(const std::vector<double>& values, double slack = 1e-15) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1] + slack * std::max(1.0, std::abs(values[k - 1]))) out.push_back(k);
  }
  return out;
}

/// Minimizes ζ (p = 3) by h_{k+1} = argmin ⟨∇ζ(h_k), h⟩ + κ(τ)·β_ρ(h_k, h).
/// σ in `config` is replaced by the coupled value for sub.tau.
inline SubsolverResult bregman_minimize_zeta_trace(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                                   const ModelConfig& config, const SubsolverConfig& sub) {
  sub.validate();
  bundle.validate();
  if (config.p != 3 || bundle.order != 3) throw InvalidArgument("bregman_minimize_zeta: requires p = 3");
  budget.validate(3);
  const ModelConfig cfg = coupled_model_config(config, budget, sub.tau);
  const RegularizedModel zeta = zeta_model(bundle, budget, cfg);
  const ReferenceFunction rho = reference_function(bundle, budget, cfg);
  const double K = relative_smoothness_constant(sub.tau);
  const QuarticSolver solver(bundle.b);

  SubsolverResult res;
  Vector h = Vector::Zero(bundle.dim());
  Vector g = zeta.grad(h);
  double val = zeta.decrease_free_value(h);
  res.model_values.push_back(val);
  const double tol = sub.grad_tol * std::max(1.0, g.norm());
  Vector best = h;
  double best_gn = g.norm();
  for (int k = 0; k < sub.max_inner; ++k) {
    if (g.norm() <= tol) break;
    const Vector c = g - K * rho.grad(h);
    const QuarticSolution step = solver.solve(c, K * rho.beta(), K * rho.a(), K * rho.b());
    res.shift = std::max(res.shift, step.shift);
    h = step.h;
    g = zeta.grad(h);
    val = zeta.decrease_free_value(h);
    res.model_values.push_back(val);
    ++res.iterations;
    if (g.norm() < best_gn) {
      best_gn = g.norm();
      best = h;
    }
  }
  res.grad_norm = g.norm();
  if (res.grad_norm > tol) {
    throw SubsolverFailure("bregman_minimize_zeta: max_inner exceeded", best, best_gn);
  }
  res.s = h;
  return res;
}

inline Vector bregman_minimize_zeta(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                    const ModelConfig& config, const SubsolverConfig& sub) {
  return bregman_minimize_zeta_trace(bundle, budget, config, sub).s;
}

}  // namespace tensoropt
