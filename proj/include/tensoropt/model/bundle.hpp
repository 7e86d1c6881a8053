#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"
#include "tensoropt/tensor/sym_tensor3.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tensoropt {

/// (Possibly inexact) derivatives G_1..G_p of f at a center x, p ∈ {2, 3}.
struct DerivativeBundle {
  Vector center;
  double f_at_x = 0.0;
  int order = 2;
  Vector g;                         // G_1
  Matrix b;                         // G_2
  std::optional<SymTensor3> t;      // G_3, present iff order == 3

  Eigen::Index dim() const { return g.size(); }

  void validate() const {
    if (order != 2 && order != 3) throw InvalidArgument("DerivativeBundle: order must be 2 or 3");
    require_same_dim(center.size(), g.size(), "DerivativeBundle");
    require_same_dim(b.rows(), g.size(), "DerivativeBundle");
    require_same_dim(b.cols(), g.size(), "DerivativeBundle");
    if ((order == 3) != t.has_value()) {
      throw InvalidArgument("DerivativeBundle: third-order term must be present iff order == 3");
    }
    if (t) require_same_dim(t->dim(), g.size(), "DerivativeBundle");
  }
};

/// Target accuracy ε and per-order tolerances κ_1..κ_p (kappa[i-1] = κ_i).
struct InexactnessBudget {
  double eps = 1e-3;
  std::vector<double> kappa;

  static InexactnessBudget exact(int p, double eps) { return {eps, std::vector<double>(static_cast<std::size_t>(p), 0.0)}; }

  double kappa_at(int i) const { return kappa.at(static_cast<std::size_t>(i - 1)); }

  void validate(int p) const {
    if (!(eps > 0.0)) throw InvalidArgument("InexactnessBudget: eps must be > 0");
    if (static_cast<int>(kappa.size()) != p) {
      throw InvalidArgument("InexactnessBudget: expected " + std::to_string(p) + " tolerances");
    }
    for (double k : kappa) {
      if (!(k >= 0.0)) throw InvalidArgument("InexactnessBudget: tolerances must be >= 0");
    }
  }
};

struct ModelConfig {
  int p = 3;
  double sigma = 1.0;
  double tau = 4.0;
  double lp = 0.0;      // certified Lipschitz constant of ∇^p f
  bool smooth = true;   // minimize ζ (true) or ω (false)

  void validate() const {
    if (p < 2) throw InvalidArgument("ModelConfig: p must be >= 2");
    if (!(sigma >= lp * (1.0 - 1e-12))) throw InvalidArgument("ModelConfig: sigma must be >= L_p");
  }
};

/// σ from 2σ + 2κ₃ = 3τ²(L₃ + κ₃).
inline double coupled_sigma(double tau, double l3, double kappa3) {
  if (!(tau > 2.0)) throw InvalidArgument("coupled_sigma: tau must be > 2");
  return 1.5 * tau * tau * (l3 + kappa3) - kappa3;
}

}  // namespace tensoropt
