#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"
#include "tensoropt/model/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace tensoropt {

/// c₀ + Σ_k c_k ‖s‖^k, the norm-power part of the regularized models.
struct RadialPenalty {
  double constant = 0.0;
  std::map<int, double> coef;  // power -> coefficient

  double value(const Vector& s) const {
    const double r = s.norm();
    double v = constant;
    for (const auto& [k, c] : coef) v += c * std::pow(r, k);
    return v;
  }

  /// Σ c_k k ‖s‖^{k-2} s. Power 1 with nonzero coefficient is not
  /// differentiable at 0.
  Vector grad(const Vector& s) const {
    const double r = s.norm();
    double scale = 0.0;
    for (const auto& [k, c] : coef) {
      if (c == 0.0) continue;
      if (r == 0.0) {
        if (k == 1) throw NonsmoothPointError("RadialPenalty: ‖s‖ term is not differentiable at 0");
        if (k == 2) scale += 2.0 * c;
        continue;
      }
      scale += c * k * std::pow(r, k - 2);
    }
    return scale * s;
  }

  Matrix hess(const Vector& s) const {
    const double r = s.norm();
    double iso = 0.0;
    double rank1 = 0.0;
    for (const auto& [k, c] : coef) {
      if (c == 0.0) continue;
      if (r == 0.0) {
        if (k == 1 || k == 3) throw NonsmoothPointError("RadialPenalty: Hessian undefined at 0");
        if (k == 2) iso += 2.0 * c;
        continue;
      }
      iso += c * k * std::pow(r, k - 2);
      rank1 += c * k * (k - 2) * std::pow(r, k - 4);
    }
    Matrix h = rank1 * (s * s.transpose());
    h.diagonal().array() += iso;
    return h;
  }

  double coefficient(int power) const {
    const auto it = coef.find(power);
    return it == coef.end() ? 0.0 : it->second;
  }
};

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// ω-penalty: Σ_i κ_i ε^{(p-i+1)/p} ‖s‖^i / i!  +  σ ‖s‖^{p+1} / ((p-1)! (p+1)).
inline RadialPenalty omega_penalty(const InexactnessBudget& budget, const ModelConfig& cfg) {
  cfg.validate();
  budget.validate(cfg.p);
  const int p = cfg.p;
  RadialPenalty pen;
  for (int i = 1; i <= p; ++i) {
    const double c = budget.kappa_at(i) * std::pow(budget.eps, static_cast<double>(p - i + 1) / p) / factorial(i);
    if (c != 0.0) pen.coef[i] += c;
  }
  pen.coef[p + 1] += cfg.sigma / (factorial(p - 1) * (p + 1));
  return pen;
}

/// Replaces every odd power c‖s‖^k with c‖s‖^{k+1}/(2α) + cα‖s‖^{k-1}/2
/// (from ‖s‖ <= ‖s‖²/(2α) + α/2). The result majorizes the input pointwise.
inline RadialPenalty smooth_even_powers(const RadialPenalty& in, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("smooth_even_powers: alpha must be > 0");
  RadialPenalty out;
  out.constant = in.constant;
  for (const auto& [k, c] : in.coef) {
    if (k % 2 == 0) {
      out.coef[k] += c;
      continue;
    }
    out.coef[k + 1] += c / (2.0 * alpha);
    if (k == 1) {
      out.constant += c * alpha / 2.0;
    } else {
      out.coef[k - 1] += c * alpha / 2.0;
    }
  }
  return out;
}

/// ζ-penalty: the ω-penalty smoothed with α = ε^{1/p}.
inline RadialPenalty zeta_penalty(const InexactnessBudget& budget, const ModelConfig& cfg) {
  return smooth_even_powers(omega_penalty(budget, cfg), std::pow(budget.eps, 1.0 / cfg.p));
}

}  // namespace tensoropt
