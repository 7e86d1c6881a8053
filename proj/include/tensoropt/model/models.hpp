#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/model/radial.hpp"

namespace tensoropt {

// φ(s) = f(x) + G₁ᵀs + ½ sᵀG₂s + ⅙ G₃[s]³ (last term only for p = 3).

inline double phi_eval(const DerivativeBundle& bundle, const Vector& s) {
  require_same_dim(s.size(), bundle.dim(), "phi_eval");
  double v = bundle.f_at_x + bundle.g.dot(s) + 0.5 * s.dot(bundle.b * s);
  if (bundle.t) v += bundle.t->apply3(s) / 6.0;
  return v;
}

inline Vector phi_grad(const DerivativeBundle& bundle, const Vector& s) {
  require_same_dim(s.size(), bundle.dim(), "phi_grad");
  Vector g = bundle.g + bundle.b * s;
  if (bundle.t) g += 0.5 * bundle.t->apply2(s);
  return g;
}

inline Matrix phi_hess(const DerivativeBundle& bundle, const Vector& s) {
  require_same_dim(s.size(), bundle.dim(), "phi_hess");
  if (bundle.t) return bundle.b + bundle.t->apply(s);
  return bundle.b;
}

/// φ plus a radial penalty. Holds a reference to the bundle.
class RegularizedModel {
 public:
  RegularizedModel(const DerivativeBundle& bundle, RadialPenalty penalty)
      : bundle_(&bundle), penalty_(std::move(penalty)) {
    bundle.validate();
  }

  double value(const Vector& s) const { return phi_eval(*bundle_, s) + penalty_.value(s); }
  /// value(s) − f(x): avoids cancellation against the constant f(x).
  double decrease_free_value(const Vector& s) const { return value(s) - bundle_->f_at_x; }
  Vector grad(const Vector& s) const { return phi_grad(*bundle_, s) + penalty_.grad(s); }
  Matrix hess(const Vector& s) const { return phi_hess(*bundle_, s) + penalty_.hess(s); }

  const DerivativeBundle& bundle() const { return *bundle_; }
  const RadialPenalty& penalty() const { return penalty_; }

 private:
  const DerivativeBundle* bundle_;
  RadialPenalty penalty_;
};

inline void check_model_order(const DerivativeBundle& bundle, const ModelConfig& cfg) {
  if (bundle.order != cfg.p) throw InvalidArgument("model order does not match bundle order");
}

inline RegularizedModel omega_model(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                    const ModelConfig& cfg) {
  check_model_order(bundle, cfg);
  return RegularizedModel(bundle, omega_penalty(budget, cfg));
}

inline RegularizedModel zeta_model(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                                   const ModelConfig& cfg) {
  check_model_order(bundle, cfg);
  return RegularizedModel(bundle, zeta_penalty(budget, cfg));
}

inline double omega_eval(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                         const ModelConfig& cfg, const Vector& s) {
  return omega_model(bundle, budget, cfg).value(s);
}

/// Throws NonsmoothPointError at s = 0 when κ₁ > 0.
inline Vector omega_grad(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                         const ModelConfig& cfg, const Vector& s) {
  return omega_model(bundle, budget, cfg).grad(s);
}

inline double zeta_eval(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                        const ModelConfig& cfg, const Vector& s) {
  return zeta_model(bundle, budget, cfg).value(s);
}

inline Vector zeta_grad(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                        const ModelConfig& cfg, const Vector& s) {
  return zeta_model(bundle, budget, cfg).grad(s);
}

inline Matrix zeta_hess(const DerivativeBundle& bundle, const InexactnessBudget& budget,
                        const ModelConfig& cfg, const Vector& s) {
  return zeta_model(bundle, budget, cfg).hess(s);
}

}  // namespace tensoropt
