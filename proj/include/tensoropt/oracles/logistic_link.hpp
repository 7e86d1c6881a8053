#pragma once

// Scalar logistic loss φ(t) = log(1 + e^{-t}) and its derivatives, evaluated
// without overflow for any finite t.

#include <cmath>

namespace tensoropt::logistic {

/// 1 / (1 + e^{-t})
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

inline double phi(double t) {
  if (t > 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

inline double phi_d1(double t) { return -sigmoid(-t); }

inline double phi_d2(double t) { return sigmoid(t) * sigmoid(-t); }

inline double phi_d3(double t) {
  const double sp = sigmoid(t);
  const double sm = sigmoid(-t);
  return sp * sm * (sm - sp);
}

inline double phi_d4(double t) {
  const double sp = sigmoid(t);
  const double sm = sigmoid(-t);
  return sp * sm * (1.0 - 6.0 * sp * sm);
}

// sup_t |φ^{(k)}(t)|
inline constexpr double kSupD1 = 1.0;
inline constexpr double kSupD2 = 0.25;
// 1 / (6√3), attained at σ(t) = (3 ± √3)/6
inline const double kSupD3 = 1.0 / (6.0 * std::sqrt(3.0));
inline constexpr double kSupD4 = 0.125;

}  // namespace tensoropt::logistic
