#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/model/models.hpp"
#include "tensoropt/model/radial.hpp"
#include "tensoropt/solvers/bregman.hpp"
#include "tensoropt/solvers/quartic.hpp"

#include <cmath>

namespace tensoropt {

/// Exact minimizer of G₁ᵀs + ½sᵀG₂s + pen(s) for a penalty built from
/// ‖s‖², ‖s‖³ and ‖s‖⁴ terms (p = 2 models).
inline QuarticSolution solve_radial_model(const DerivativeBundle& bundle, const RadialPenalty& pen) {
  bundle.validate();
  if (bundle.order != 2) throw InvalidArgument("solve_radial_model: requires a second-order bundle");
  for (const auto& [k, c] : pen.coef) {
    if (c != 0.0 && (k < 2 || k > 4)) throw InvalidArgument("solve_radial_model: penalty power must be 2, 3 or 4");
  }
  return QuarticSolver(bundle.b).solve_radial(bundle.g, 1.0, 2.0 * pen.coefficient(2), 3.0 * pen.coefficient(3),
                                              4.0 * pen.coefficient(4));
}

/// Exact minimizer of ζ for p = 2, where the penalty is c₀ + c₂‖s‖² + c₄‖s‖⁴.
inline Vector solve_model_p2(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                             const ModelConfig& config) {
  if (config.p != 2) throw InvalidArgument("solve_model_p2: requires p = 2");
  check_model_order(bundle, config);
  return solve_radial_model(bundle, zeta_penalty(budget, config)).h;
}

/// Exact minimizer of ω for p = 2. Requires κ₁ = 0 (ω is otherwise nonsmooth at 0).
inline Vector solve_omega_p2(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                             const ModelConfig& config) {
  if (config.p != 2) throw InvalidArgument("solve_omega_p2: requires p = 2");
  check_model_order(bundle, config);
  if (budget.kappa_at(1) != 0.0) throw InvalidArgument("solve_omega_p2: κ₁ > 0 makes ω nonsmooth; use ζ");
  return solve_radial_model(bundle, omega_penalty(budget, config)).h;
}

/// Gradient descent with Armijo backtracking and Barzilai–Borwein trial steps.
/// Once decreases fall below the rounding level of the model value, a step is
/// also accepted if the value stays within that level and ‖∇‖ shrinks.
inline SubsolverResult generic_model_minimize_trace(const RegularizedModel& model, double grad_tol,
                                                    int max_iter = 200000) {
  const Eigen::Index n = model.bundle().dim();
  SubsolverResult res;
  Vector h = Vector::Zero(n);
  Vector g = model.grad(h);
  double val = model.decrease_free_value(h);
  res.model_values.push_back(val);
  const double tol = grad_tol * std::max(1.0, g.norm());
  double step = 1.0;
  Vector h_prev, g_prev;
  for (int k = 0; k < max_iter; ++k) {
    if (g.norm() <= tol) {
      res.s = h;
      res.grad_norm = g.norm();
      return res;
    }
    if (k > 0) {
      const Vector dh = h - h_prev;
      const Vector dg = g - g_prev;
      const double sy = dh.dot(dg);
      if (sy > 0.0) step = dh.squaredNorm() / sy;
    }
    const double gg = g.squaredNorm();
    const double noise = 1e-14 * std::max(1.0, std::abs(val));
    double t = step;
    Vector trial, trial_g;
    double trial_val = 0.0;
    bool accepted = false;
    for (int bt = 0; bt <= 60; ++bt, t *= 0.5) {
      trial = h - t * g;
      trial_val = model.decrease_free_value(trial);
      if (trial_val <= val - 1e-4 * t * gg) {
        trial_g = model.grad(trial);
        accepted = true;
        break;
      }
      if (trial_val <= val + noise) {
        trial_g = model.grad(trial);
        if (trial_g.norm() < g.norm()) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) throw SubsolverFailure("generic_model_minimize: line search failed", h, g.norm());
    h_prev = h;
    g_prev = g;
    h = trial;
    val = trial_val;
    g = trial_g;
    res.model_values.push_back(val);
    ++res.iterations;
  }
  throw SubsolverFailure("generic_model_minimize: iteration cap exceeded", h, g.norm());
}

inline Vector generic_model_minimize(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                     const ModelConfig& config, double grad_tol = 1e-9) {
  return generic_model_minimize_trace(zeta_model(bundle, budget, config), grad_tol).s;
}

struct StepResult {
  Vector s;
  int inner_iterations = 0;
};

/// Step of the outer method: minimizer of ζ (config.smooth) or ω.
///   p = 2: exact secular solve (ω needs κ₁ = 0).
///   p = 3, ζ: Bregman loop, σ taken from the τ coupling.
///   p = 3, ω: ω = ζ when κ = 0; otherwise the first-order fallback (κ₁ = 0 required).
inline StepResult solve_model(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                              const ModelConfig& config, const SubsolverConfig& sub) {
  check_model_order(bundle, config);
  if (config.p == 2) {
    const QuarticSolution q = config.smooth ? solve_radial_model(bundle, zeta_penalty(budget, config))
                                            : solve_radial_model(bundle, omega_penalty(budget, config));
    if (!config.smooth && budget.kappa_at(1) != 0.0) {
      throw InvalidArgument("solve_model: κ₁ > 0 makes ω nonsmooth; use ζ");
    }
    return {q.h, q.iterations};
  }
  if (config.p != 3) throw InvalidArgument("solve_model: p must be 2 or 3");
  bool zero_kappa = true;
  for (double k : budget.kappa) zero_kappa = zero_kappa && k == 0.0;
  if (config.smooth || zero_kappa) {
    const SubsolverResult r = bregman_minimize_zeta_trace(bundle, budget, config, sub);
    return {r.s, r.iterations};
  }
  if (budget.kappa_at(1) != 0.0) throw InvalidArgument("solve_model: κ₁ > 0 makes ω nonsmooth; use ζ");
  const SubsolverResult r = generic_model_minimize_trace(omega_model(bundle, budget, config), sub.grad_tol);
  return {r.s, r.iterations};
}

}  // namespace tensoropt
