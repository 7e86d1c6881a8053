#pragma once

// Power prox functions d_p(x) = ‖x‖^p / p and their first two derivatives.

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"

#include <cmath>
#include <string>

namespace tensoropt {

namespace detail {
inline void require_order(int p, int min_order, const char* where) {
  if (p < min_order) {
    throw InvalidArgument(std::string(where) + ": order must be >= " + std::to_string(min_order));
  }
}
}  // namespace detail

inline double dp_value(const Vector& x, int p) {
  detail::require_order(p, 1, "dp_value");
  return std::pow(x.norm(), p) / p;
}

/// ∇d_p(x) = ‖x‖^{p-2} x. Zero at the origin for p >= 2; undefined there for p = 1.
inline Vector dp_grad(const Vector& x, int p) {
  detail::require_order(p, 1, "dp_grad");
  if (p == 2) return x;
  const double r = x.norm();
  if (r == 0.0) {
    if (p == 1) throw NonsmoothPointError("dp_grad: d_1 is not differentiable at 0");
    return Vector::Zero(x.size());
  }
  return std::pow(r, p - 2) * x;
}

/// ∇²d_p(x) = (p-2)‖x‖^{p-4} x xᵀ + ‖x‖^{p-2} I.
///
/// At the origin: identity for p = 2, zero for p >= 4, and an error for
/// p = 1 and p = 3 (the Hessian is unbounded or discontinuous there).
inline Matrix dp_hess(const Vector& x, int p) {
  detail::require_order(p, 1, "dp_hess");
  const Eigen::Index n = x.size();
  if (p == 2) return Matrix::Identity(n, n);
  const double r = x.norm();
  if (r == 0.0) {
    if (p == 1 || p == 3) {
      throw NonsmoothPointError("dp_hess: d_" + std::to_string(p) + " has no Hessian at 0");
    }
    return Matrix::Zero(n, n);
  }
  Matrix h = (p - 2) * std::pow(r, p - 4) * (x * x.transpose());
  h.diagonal().array() += std::pow(r, p - 2);
  return h;
}

}  // namespace tensoropt
