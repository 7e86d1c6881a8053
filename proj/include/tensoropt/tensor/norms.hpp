#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"
#include "tensoropt/tensor/sym_tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace tensoropt {

inline constexpr Eigen::Index kDenseEigenMaxDim = 200;

/// Spectral norm (largest |eigenvalue|) of a symmetric matrix.
///
/// Uses a full symmetric eigendecomposition up to n = 200 and power
/// iteration on M² above that.
inline double opnorm_mat(const Matrix& m) {
  require_same_dim(m.rows(), m.cols(), "opnorm_mat");
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  if (n <= kDenseEigenMaxDim) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
  }

  constexpr int kMaxIter = 20000;
  constexpr double kTol = 1e-10;
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double prev = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    const Vector w = m * (m * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double est = std::sqrt(v.dot(w));
    v = w / nw;
    if (it > 0 && std::abs(est - prev) <= kTol * est) return est;
    prev = est;
  }
  throw EstimationError("opnorm_mat: power iteration did not converge");
}

/// Lower-bound estimate of max_{‖s‖=1} ‖T[s]²‖ (the spectral norm of a
/// symmetric tensor).
///
/// Directions are drawn from a single stream seeded by `seed`; direction d is
/// the same for every n_dirs > d, so the estimate is nondecreasing in n_dirs.
/// Each start is refined by `ascent_steps` steps of s ← T[s]²/‖T[s]²‖ and the
/// best value seen along the path is kept.
inline double t3_norm_estimate(const SymTensor3& t, int n_dirs, std::uint64_t seed,
                               int ascent_steps = 12) {
  if (n_dirs < 1) throw InvalidArgument("t3_norm_estimate: n_dirs must be >= 1");
  const Eigen::Index n = t.dim();
  if (n == 0) return 0.0;
  std::mt19937_64 rng(seed);
  double best = 0.0;
  Vector s(n);
  for (int d = 0; d < n_dirs; ++d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = normal(rng);
    double ns = s.norm();
    if (ns == 0.0) continue;
    s /= ns;
    for (int step = 0; step <= ascent_steps; ++step) {
      const Vector g = t.apply2(s);
      const double val = g.norm();
      best = std::max(best, val);
      if (val == 0.0) break;
      s = g / val;
    }
  }
  return best;
}

}  // namespace tensoropt
