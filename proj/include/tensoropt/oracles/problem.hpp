#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"
#include "tensoropt/oracles/logistic_link.hpp"
#include "tensoropt/tensor/norms.hpp"
#include "tensoropt/tensor/sym_tensor3.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tensoropt {

enum class ProblemKind { kQuadratic, kLogistic };

/// Lipschitz constants L_0..L_3 of f, ∇f, ∇²f, ∇³f on a ball, and uniform
/// per-sample deviation bounds M_1..M_3 (M[0] is unused).
struct LipschitzProfile {
  std::array<double, 4> L{};
  std::array<double, 4> M{};
};

/// Lower bound applied to L_p when the true constant is zero (quadratics),
/// so that σ >= L_p > 0 stays meaningful.
inline constexpr double kLipschitzFloor = 1e-8;

/// Sparse weighted selection of components: f_S = Σ weights[j] f_{indices[j]}.
struct ComponentWeights {
  std::vector<Eigen::Index> indices;
  std::vector<double> weights;
};

/// f(x) = ½ xᵀAx − bᵀx with A symmetric PSD. A single component.
class QuadraticProblem {
 public:
  QuadraticProblem(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    require_same_dim(a_.rows(), a_.cols(), "QuadraticProblem");
    require_same_dim(a_.rows(), b_.size(), "QuadraticProblem");
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a_.cwiseAbs().maxCoeff())) {
      throw InvalidArgument("QuadraticProblem: A is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a_, Eigen::EigenvaluesOnly);
    lambda_min_ = es.eigenvalues()(0);
    lambda_max_ = es.eigenvalues()(a_.rows() - 1);
    if (lambda_min_ < -1e-10) throw InvalidArgument("QuadraticProblem: A is not PSD");
  }

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  Eigen::Index dim() const { return b_.size(); }
  Eigen::Index components() const { return 1; }
  double lambda_max() const { return lambda_max_; }

  double value(const Vector& x) const { return 0.5 * x.dot(a_ * x) - b_.dot(x); }
  Vector gradient(const Vector& x) const { return a_ * x - b_; }
  Matrix hessian(const Vector&) const { return a_; }
  SymTensor3 third(const Vector&) const { return SymTensor3::zero(dim()); }

  LipschitzProfile lipschitz_profile(const Vector& x0, double radius) const {
    LipschitzProfile lp;
    lp.L[0] = gradient(x0).norm() + lambda_max_ * radius;
    lp.L[1] = lambda_max_;
    lp.L[2] = kLipschitzFloor;
    lp.L[3] = kLipschitzFloor;
    return lp;  // one component: no sampling deviation
  }

 private:
  Matrix a_;
  Vector b_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

/// f(x) = (1/m) Σ_j φ(y_j a_jᵀx) + (μ/2)‖x‖², φ(t) = log(1 + e^{-t}).
/// Component j is f_j(x) = φ(y_j a_jᵀx) + (μ/2)‖x‖².
class LogisticProblem {
 public:
  LogisticProblem(Matrix rows, Vector labels, double mu)
      : rows_(std::move(rows)), labels_(std::move(labels)), mu_(mu) {
    require_same_dim(rows_.rows(), labels_.size(), "LogisticProblem");
    if (rows_.rows() == 0) throw InvalidArgument("LogisticProblem: no components");
    if (!(mu_ >= 0.0)) throw InvalidArgument("LogisticProblem: mu must be >= 0");
    for (Eigen::Index j = 0; j < labels_.size(); ++j) {
      if (labels_(j) != 1.0 && labels_(j) != -1.0) {
        throw InvalidArgument("LogisticProblem: labels must be in {-1, +1}");
      }
    }
    max_row_norm_ = rows_.rowwise().norm().maxCoeff();
    uniform_ = Vector::Constant(rows_.rows(), 1.0 / static_cast<double>(rows_.rows()));
  }

  const Matrix& rows() const { return rows_; }
  const Vector& labels() const { return labels_; }
  double mu() const { return mu_; }
  double max_row_norm() const { return max_row_norm_; }
  Eigen::Index dim() const { return rows_.cols(); }
  Eigen::Index components() const { return rows_.rows(); }

  double value(const Vector& x) const { return value_impl(rows_, labels_, uniform_, x); }
  Vector gradient(const Vector& x) const { return gradient_impl(rows_, labels_, uniform_, x); }
  Matrix hessian(const Vector& x) const { return hessian_impl(rows_, labels_, uniform_, x); }
  SymTensor3 third(const Vector& x) const { return third_impl(rows_, labels_, uniform_, x); }

  double weighted_value(const ComponentWeights& cw, const Vector& x) const {
    const Gathered g = gather(cw);
    return value_impl(g.rows, g.labels, g.weights, x);
  }
  Vector weighted_gradient(const ComponentWeights& cw, const Vector& x) const {
    const Gathered g = gather(cw);
    return gradient_impl(g.rows, g.labels, g.weights, x);
  }
  Matrix weighted_hessian(const ComponentWeights& cw, const Vector& x) const {
    const Gathered g = gather(cw);
    return hessian_impl(g.rows, g.labels, g.weights, x);
  }
  SymTensor3 weighted_third(const ComponentWeights& cw, const Vector& x) const {
    Gathered g = gather(cw);
    return third_impl(g.rows, g.labels, g.weights, x);
  }

  /// Constants certified on the ball of radius R around x0. The loss part is
  /// bounded globally by max_j ‖a_j‖^{i+1} sup|φ^{(i+1)}|; the ridge term adds
  /// μ(‖x0‖ + R) to L_0 and μ to L_1. Ridge terms cancel in the deviations M_i.
  LipschitzProfile lipschitz_profile(const Vector& x0, double radius) const {
    const double r = max_row_norm_;
    LipschitzProfile lp;
    lp.L[0] = r * logistic::kSupD1 + mu_ * (x0.norm() + radius);
    lp.L[1] = r * r * logistic::kSupD2 + mu_;
    lp.L[2] = r * r * r * logistic::kSupD3;
    lp.L[3] = r * r * r * r * logistic::kSupD4;
    lp.M[1] = 2.0 * r * logistic::kSupD1;
    lp.M[2] = 2.0 * r * r * logistic::kSupD2;
    lp.M[3] = 2.0 * r * r * r * logistic::kSupD3;
    return lp;
  }

 private:
  struct Gathered {
    Matrix rows;
    Vector labels;
    Vector weights;
  };

  Gathered gather(const ComponentWeights& cw) const {
    if (cw.indices.size() != cw.weights.size()) {
      throw DimensionError("LogisticProblem: indices/weights size mismatch");
    }
    const auto k = static_cast<Eigen::Index>(cw.indices.size());
    Gathered g{Matrix(k, dim()), Vector(k), Vector(k)};
    for (Eigen::Index r = 0; r < k; ++r) {
      const Eigen::Index j = cw.indices[static_cast<std::size_t>(r)];
      if (j < 0 || j >= components()) throw InvalidArgument("LogisticProblem: component index out of range");
      g.rows.row(r) = rows_.row(j);
      g.labels(r) = labels_(j);
      g.weights(r) = cw.weights[static_cast<std::size_t>(r)];
    }
    return g;
  }

  static Vector margins(const Matrix& rows, const Vector& labels, const Vector& x) {
    return labels.cwiseProduct(rows * x);
  }

  double value_impl(const Matrix& rows, const Vector& labels, const Vector& w, const Vector& x) const {
    require_same_dim(x.size(), dim(), "LogisticProblem::value");
    const Vector t = margins(rows, labels, x);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < t.size(); ++j) acc += w(j) * logistic::phi(t(j));
    return acc + 0.5 * mu_ * w.sum() * x.squaredNorm();
  }

  Vector gradient_impl(const Matrix& rows, const Vector& labels, const Vector& w, const Vector& x) const {
    require_same_dim(x.size(), dim(), "LogisticProblem::gradient");
    const Vector t = margins(rows, labels, x);
    Vector c(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) c(j) = w(j) * logistic::phi_d1(t(j)) * labels(j);
    return rows.transpose() * c + mu_ * w.sum() * x;
  }

  Matrix hessian_impl(const Matrix& rows, const Vector& labels, const Vector& w, const Vector& x) const {
    require_same_dim(x.size(), dim(), "LogisticProblem::hessian");
    const Vector t = margins(rows, labels, x);
    Vector c(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) c(j) = w(j) * logistic::phi_d2(t(j));
    Matrix h = rows.transpose() * c.asDiagonal() * rows;
    h.diagonal().array() += mu_ * w.sum();
    return h;
  }

  SymTensor3 third_impl(const Matrix& rows, const Vector& labels, const Vector& w, const Vector& x) const {
    require_same_dim(x.size(), dim(), "LogisticProblem::third");
    const Vector t = margins(rows, labels, x);
    Vector c(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) c(j) = w(j) * logistic::phi_d3(t(j)) * labels(j);
    return SymTensor3::rank_one_sum(rows, std::move(c));
  }

  Matrix rows_;
  Vector labels_;
  double mu_;
  double max_row_norm_ = 0.0;
  Vector uniform_;
};

/// A convex test problem with analytic derivatives up to third order.
class Problem {
 public:
  Problem(QuadraticProblem q) : impl_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Problem(LogisticProblem l) : impl_(std::move(l)) {}   // NOLINT(google-explicit-constructor)

  ProblemKind kind() const {
    return std::holds_alternative<QuadraticProblem>(impl_) ? ProblemKind::kQuadratic : ProblemKind::kLogistic;
  }
  const QuadraticProblem* as_quadratic() const { return std::get_if<QuadraticProblem>(&impl_); }
  const LogisticProblem* as_logistic() const { return std::get_if<LogisticProblem>(&impl_); }

  Eigen::Index dim() const {
    return std::visit([](const auto& p) { return p.dim(); }, impl_);
  }
  Eigen::Index components() const {
    return std::visit([](const auto& p) { return p.components(); }, impl_);
  }

  double value(const Vector& x) const {
    check_x(x);
    return std::visit([&](const auto& p) { return p.value(x); }, impl_);
  }
  Vector gradient(const Vector& x) const {
    check_x(x);
    return std::visit([&](const auto& p) { return p.gradient(x); }, impl_);
  }
  Matrix hessian(const Vector& x) const {
    check_x(x);
    return std::visit([&](const auto& p) { return p.hessian(x); }, impl_);
  }
  /// Third derivative in operator (rank-one sum) form; no capacity limit.
  SymTensor3 third(const Vector& x) const {
    check_x(x);
    return std::visit([&](const auto& p) { return p.third(x); }, impl_);
  }
  /// Third derivative materialized as a dense tensor (n <= 100).
  SymTensor3 third_dense(const Vector& x) const { return third(x).to_dense(); }

  /// (∇³f(x)[s]², ∇³f(x)[s]³) without forming the tensor.
  std::pair<Vector, double> third_directional(const Vector& x, const Vector& s) const {
    require_same_dim(s.size(), dim(), "Problem::third_directional");
    const SymTensor3 t = third(x);
    Vector t2 = t.apply2(s);
    const double t3 = s.dot(t2);
    return {std::move(t2), t3};
  }

  /// Weighted sum Σ w_j ∇^order f_j(x) over selected components (order 0..3).
  using AnyDerivative = std::variant<double, Vector, Matrix, SymTensor3>;

  double weighted_value(const ComponentWeights& cw, const Vector& x) const {
    check_x(x);
    if (const auto* q = as_quadratic()) return weight_total(cw, 1) * q->value(x);
    return as_logistic()->weighted_value(cw, x);
  }
  Vector weighted_gradient(const ComponentWeights& cw, const Vector& x) const {
    check_x(x);
    if (const auto* q = as_quadratic()) return weight_total(cw, 1) * q->gradient(x);
    return as_logistic()->weighted_gradient(cw, x);
  }
  Matrix weighted_hessian(const ComponentWeights& cw, const Vector& x) const {
    check_x(x);
    if (const auto* q = as_quadratic()) return weight_total(cw, 1) * q->hessian(x);
    return as_logistic()->weighted_hessian(cw, x);
  }
  SymTensor3 weighted_third(const ComponentWeights& cw, const Vector& x) const {
    check_x(x);
    if (const auto* q = as_quadratic()) return q->third(x).scaled(weight_total(cw, 1));
    return as_logistic()->weighted_third(cw, x);
  }

  /// Derivative of order `order` of the single component f_j.
  AnyDerivative component_derivative(Eigen::Index j, const Vector& x, int order) const {
    if (j < 0 || j >= components()) {
      throw InvalidArgument("component index " + std::to_string(j) + " out of range");
    }
    const ComponentWeights cw{{j}, {1.0}};
    switch (order) {
      case 0: return weighted_value(cw, x);
      case 1: return weighted_gradient(cw, x);
      case 2: return weighted_hessian(cw, x);
      case 3: return weighted_third(cw, x);
      default: throw InvalidArgument("component_derivative: order must be in 0..3");
    }
  }

  LipschitzProfile lipschitz_profile(const Vector& x0, double radius) const {
    if (!(radius > 0.0)) throw InvalidArgument("lipschitz_profile: radius must be > 0");
    check_x(x0);
    return std::visit([&](const auto& p) { return p.lipschitz_profile(x0, radius); }, impl_);
  }

 private:
  void check_x(const Vector& x) const {
    require_same_dim(x.size(), dim(), "Problem");
    if (!x.allFinite()) throw InvalidArgument("Problem: non-finite point");
  }

  double weight_total(const ComponentWeights& cw, Eigen::Index m) const {
    double total = 0.0;
    for (std::size_t r = 0; r < cw.indices.size(); ++r) {
      if (cw.indices[r] < 0 || cw.indices[r] >= m) throw InvalidArgument("component index out of range");
      total += cw.weights[r];
    }
    return total;
  }

  std::variant<QuadraticProblem, LogisticProblem> impl_;
};

/// Logistic instance with standard-normal feature rows rescaled to ‖a‖ <= clamp,
/// labels drawn from a planted model P(y = +1) = σ(w*ᵀa), w* ~ N(0, planted_scale² I).
inline LogisticProblem make_logistic(Eigen::Index n, Eigen::Index m, double mu, std::uint64_t seed,
                                     double clamp = 2.0, double planted_scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = planted_scale * normal(rng);
  Matrix rows(m, n);
  Vector labels(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) rows(j, i) = normal(rng);
    const double nr = rows.row(j).norm();
    if (nr > clamp) rows.row(j) *= clamp / nr;
    labels(j) = unif(rng) < logistic::sigmoid(rows.row(j).dot(w)) ? 1.0 : -1.0;
  }
  return LogisticProblem(std::move(rows), std::move(labels), mu);
}

/// Quadratic with eigenvalues log-spaced in [1/condition, 1] and random rotation.
inline QuadraticProblem make_quadratic(Eigen::Index n, std::uint64_t seed, double condition = 10.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector ev(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    ev(i) = std::pow(condition, -frac);
  }
  Matrix a = q * ev.asDiagonal() * q.transpose();
  a = (0.5 * (a + a.transpose())).eval();
  Vector b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = normal(rng);
  return QuadraticProblem(std::move(a), std::move(b));
}

}  // namespace tensoropt
