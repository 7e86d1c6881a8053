#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace tensoropt {

/// q(h) = cᵀh + (β/2) hᵀBh + (a/2)‖h‖² + (b/4)‖h‖⁴.
struct RegularizedQuartic {
  Vector c;
  Matrix B;
  double beta = 1.0;
  double a = 0.0;
  double b = 0.0;

  double value(const Vector& h) const {
    const double r2 = h.squaredNorm();
    return c.dot(h) + 0.5 * beta * h.dot(B * h) + 0.5 * a * r2 + 0.25 * b * r2 * r2;
  }
  Vector grad(const Vector& h) const { return c + beta * (B * h) + (a + b * h.squaredNorm()) * h; }
};

struct QuarticSolution {
  Vector h;
  double mu = 0.0;         // a + b‖h‖² at the solution
  bool hard_case = false;
  double shift = 0.0;      // spectral shift applied to βB (0 when βB ⪰ 0)
  int iterations = 0;
};

/// Minimizer of a regularized quartic with a fixed matrix B.
///
/// B is eigendecomposed once at construction, so repeated solves with
/// different (c, β, a, b) cost O(n²) each. The minimizer satisfies
/// (βB + μI)h = −c with μ = a + b‖h‖² and βB + μI ⪰ 0; μ is the unique root
/// of the decreasing function ψ(μ) = a + b r(μ)² − μ, r(μ) = ‖(βΛ + μ)⁻¹Qᵀc‖,
/// found by safeguarded Newton with a bisection fallback.
class QuarticSolver {
 public:
  explicit QuarticSolver(const Matrix& B) {
    require_same_dim(B.rows(), B.cols(), "QuarticSolver");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (B + B.transpose()));
    if (es.info() != Eigen::Success) throw EstimationError("QuarticSolver: eigendecomposition failed");
    q_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
  }

  Eigen::Index dim() const { return lambda_.size(); }
  const Vector& eigenvalues() const { return lambda_; }

  QuarticSolution solve(const Vector& c, double beta, double a, double b) const {
    return solve_radial(c, beta, a, 0.0, b);
  }

  /// Minimizer of cᵀh + (β/2)hᵀBh + (a/2)‖h‖² + (b₃/3)‖h‖³ + (b₄/4)‖h‖⁴,
  /// i.e. the root of μ = a + b₃r + b₄r².
  QuarticSolution solve_radial(const Vector& c, double beta, double a, double b3, double b4) const {
    require_same_dim(c.size(), dim(), "QuarticSolver::solve");
    if (!(beta >= 0.0) || !(b3 >= 0.0) || !(b4 >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("QuarticSolver: need beta >= 0, b >= 0 and finite a");
    }
    const Eigen::Index n = dim();
    QuarticSolution sol;
    if (n == 0) {
      sol.h = Vector(0);
      return sol;
    }

    // Shift βB to be PSD and fold the shift into a; the objective is unchanged.
    Vector ev = beta * lambda_;
    const double lmin = ev.minCoeff();
    if (lmin < 0.0) {
      sol.shift = -lmin + 1e-12;
      ev.array() += sol.shift;
    }
    const double a_s = a - sol.shift;
    const double ev_min = ev.minCoeff();
    const double lo = -ev_min;  // μ must exceed this (up to the hard case)

    const Vector chat = q_.transpose() * c;
    const double cnorm = chat.norm();
    const double spread = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double bottom_tol = 1e-12 * spread;
    const double c_tol = 1e-14 * std::max(1.0, cnorm);

    double bottom_c2 = 0.0;
    double rest_r2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (ev(i) <= ev_min + bottom_tol) {
        bottom_c2 += chat(i) * chat(i);
      } else {
        const double d = ev(i) - ev_min;
        rest_r2 += chat(i) * chat(i) / (d * d);
      }
    }
    const bool bottom_empty = std::sqrt(bottom_c2) <= c_tol;

    auto r_of = [&](double mu) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = ev(i) + mu;
        acc += chat(i) * chat(i) / (d * d);
      }
      return std::sqrt(acc);
    };
    auto assemble = [&](double mu) {
      Vector y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = ev(i) + mu;
        y(i) = d > 0.0 ? -chat(i) / d : 0.0;
      }
      return y;
    };
    auto penalty_mu = [&](double r) { return a_s + b3 * r + b4 * r * r; };

    if (b3 == 0.0 && b4 == 0.0) {
      if (!(a_s > lo) && !(bottom_empty && a_s >= lo)) {
        throw InvalidArgument("QuarticSolver: no growth term and βB + aI is not positive definite (unbounded)");
      }
      sol.mu = a_s + sol.shift;
      sol.h = q_ * assemble(a_s);
      return sol;
    }

    // Hard case: c has no component on the bottom eigenspace and ψ(lo) <= 0.
    if (bottom_empty && penalty_mu(std::sqrt(rest_r2)) - lo <= 0.0) {
      // Radius with a + b₃r + b₄r² = lo.
      double r = 0.0;
      if (b4 > 0.0) {
        r = (-b3 + std::sqrt(std::max(0.0, b3 * b3 - 4.0 * b4 * (a_s - lo)))) / (2.0 * b4);
      } else {
        r = (lo - a_s) / b3;
      }
      Vector y = assemble(lo);
      Eigen::Index k = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (ev(i) <= ev_min + bottom_tol) {
          y(i) = 0.0;
          if (k < 0) k = i;
        }
      }
      const double extra = std::sqrt(std::max(0.0, r * r - y.squaredNorm()));
      y(k) = extra;
      sol.hard_case = extra > 0.0;
      sol.mu = lo + sol.shift;
      sol.h = q_ * y;
      return sol;
    }
    if (cnorm == 0.0) {  // ψ(lo) > 0 with c = 0: μ = a, h = 0
      sol.mu = a;
      sol.h = Vector::Zero(n);
      return sol;
    }

    auto psi = [&](double mu) { return penalty_mu(r_of(mu)) - mu; };
    auto dpsi = [&](double mu) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = ev(i) + mu;
        acc += chat(i) * chat(i) / (d * d * d);
      }
      const double r = r_of(mu);
      return -(b3 + 2.0 * b4 * r) * acc / r - 1.0;
    };

    // Bracket [left, right] with ψ(left) > 0 (or left == lo), ψ(right) < 0.
    double left = lo;
    double width = std::max({1.0, std::abs(a_s), std::cbrt(b4 * cnorm * cnorm), std::sqrt(b3 * cnorm)});
    double right = std::max(lo, a_s) + width;
    while (psi(right) > 0.0) {
      left = right;
      width *= 2.0;
      right = std::max(lo, a_s) + width;
      if (!std::isfinite(right)) throw EstimationError("QuarticSolver: failed to bracket root");
    }

    double mu = 0.5 * (left + right);
    constexpr int kMaxIter = 500;
    int it = 0;
    for (; it < kMaxIter; ++it) {
      const double v = psi(mu);
      if (v > 0.0) {
        left = mu;
      } else if (v < 0.0) {
        right = mu;
      } else {
        break;
      }
      const double scale = std::max(1.0, std::abs(mu));
      if (right - left <= 1e-15 * scale) break;
      double next = mu - v / dpsi(mu);
      if (!(next > left && next < right)) next = 0.5 * (left + right);
      if (std::abs(next - mu) <= 1e-14 * scale) {
        mu = next;
        break;
      }
      mu = next;
    }
    sol.iterations = it;
    sol.mu = mu + sol.shift;
    sol.h = q_ * assemble(mu);
    return sol;
  }

 private:
  Matrix q_;
  Vector lambda_;
};

/// One-shot solve (eigendecomposes q.B).
inline Vector solve_regularized_quartic(const RegularizedQuartic& q) {
  return QuarticSolver(q.B).solve(q.c, q.beta, q.a, q.b).h;
}

}  // namespace tensoropt
