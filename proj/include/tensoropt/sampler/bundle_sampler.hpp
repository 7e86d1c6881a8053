#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/oracles/problem.hpp"
#include "tensoropt/oracles/sampling.hpp"
#include "tensoropt/sampler/batch_size.hpp"
#include "tensoropt/tensor/norms.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tensoropt {

/// Component-derivative evaluations spent on a bundle, per order.
struct OracleCounters {
  std::int64_t grad = 0;
  std::int64_t hess = 0;
  std::int64_t third = 0;

  OracleCounters& operator+=(const OracleCounters& o) {
    grad += o.grad;
    hess += o.hess;
    third += o.third;
    return *this;
  }
};

inline DerivativeBundle exact_bundle(const Problem& prob, const Vector& x, int p, OracleCounters* cost = nullptr) {
  if (p != 2 && p != 3) throw InvalidArgument("exact_bundle: p must be 2 or 3");
  DerivativeBundle b;
  b.center = x;
  b.order = p;
  b.f_at_x = prob.value(x);
  b.g = prob.gradient(x);
  b.b = prob.hessian(x);
  if (p == 3) b.t = prob.third(x);
  if (cost) {
    const std::int64_t m = prob.components();
    cost->grad += m;
    cost->hess += m;
    if (p == 3) cost->third += m;
  }
  return b;
}

/// G_i = mean of ∇^i f_j over an independent draw S_i per order. Orders with
/// no batch size in the plan use exact derivatives. f(x) is always exact.
inline DerivativeBundle sample_bundle(const Problem& prob, const Vector& x, const BatchPlan& plan, std::mt19937_64& rng,
                                      OracleCounters* cost = nullptr) {
  const int p = plan.order();
  if (p != 2 && p != 3) throw InvalidArgument("sample_bundle: plan must cover orders 1..p, p in {2, 3}");
  const std::int64_t m = prob.components();
  plan.validate(m);
  require_same_dim(x.size(), prob.dim(), "sample_bundle");

  auto weights_for = [&](int i, std::int64_t* spent) {
    const auto& ni = plan.n[static_cast<std::size_t>(i - 1)];
    if (!ni) {
      *spent = m;
      return full_batch_weights(m);
    }
    *spent = *ni;
    return draw(prob, plan.mode, *ni, rng).weights();
  };

  DerivativeBundle b;
  b.center = x;
  b.order = p;
  b.f_at_x = prob.value(x);
  OracleCounters c;
  b.g = prob.weighted_gradient(weights_for(1, &c.grad), x);
  b.b = prob.weighted_hessian(weights_for(2, &c.hess), x);
  if (p == 3) b.t = prob.weighted_third(weights_for(3, &c.third), x);
  if (cost) *cost += c;
  return b;
}

/// Per-order ratios ‖(G_i − ∇^i f)[s]^{i-1}‖ / (ε^{(p-i+1)/p}‖s‖^{i-1}),
/// maximized over s, and pass flags against κ_i.
struct ConditionReport {
  std::vector<double> ratio;  // ratio[i-1]
  std::vector<bool> pass;

  bool all_pass() const {
    for (bool b : pass)
      if (!b) return false;
    return true;
  }
};

/// Safety factor on the i = 3 estimate, which is a lower bound.
inline constexpr double kThirdOrderSafety = 2.0;

/// i = 1 and i = 2 are exact (vector norm, spectral norm); i = 3 uses
/// t3_norm_estimate with n_dirs random starts and passes iff 2·ratio <= κ₃.
inline ConditionReport verify_condition(const Problem& prob, const DerivativeBundle& bundle,
                                        const InexactnessBudget& budget, int n_dirs, std::uint64_t seed) {
  bundle.validate();
  const int p = bundle.order;
  budget.validate(p);
  const Vector& x = bundle.center;
  auto scale = [&](int i) { return std::pow(budget.eps, static_cast<double>(p - i + 1) / p); };

  ConditionReport rep;
  rep.ratio.push_back((bundle.g - prob.gradient(x)).norm() / scale(1));
  const Matrix dh = bundle.b - prob.hessian(x);
  rep.ratio.push_back(opnorm_mat((0.5 * (dh + dh.transpose())).eval()) / scale(2));
  if (p == 3) {
    SymTensor3 diff = *bundle.t - prob.third(x);
    const Eigen::Index n = diff.dim();
    if (!diff.is_dense() && n <= kMaxDenseTensorDim && n * n < diff.terms()) diff = diff.to_dense();
    rep.ratio.push_back(t3_norm_estimate(diff, n_dirs, seed) / scale(3));
  }
  for (int i = 1; i <= p; ++i) {
    const double r = rep.ratio[static_cast<std::size_t>(i - 1)];
    const double factor = i == 3 ? kThirdOrderSafety : 1.0;
    rep.pass.push_back(factor * r <= budget.kappa_at(i));
  }
  return rep;
}

}  // namespace tensoropt
