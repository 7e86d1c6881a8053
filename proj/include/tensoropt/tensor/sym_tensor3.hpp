#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace tensoropt {

/// Symmetric third-order tensor on ℝⁿ.
///
/// Two storage forms are supported:
///  - dense: all n³ entries, allowed for n <= kMaxDenseTensorDim;
///  - rank-one sum: T = Σ_j w_j a_j ⊗ a_j ⊗ a_j, kept as the rows a_j and
///    weights w_j. Contractions cost O(rows · n) and the tensor is never
///    materialized, which is how third derivatives of finite-sum GLM losses
///    are represented.
/// The zero tensor is an empty rank-one sum.
class SymTensor3 {
 public:
  SymTensor3() = default;

  static SymTensor3 zero(Eigen::Index n) {
    SymTensor3 t;
    t.n_ = n;
    t.rows_.resize(0, n);
    return t;
  }

  /// Dense tensor from row-major entries T(i,j,k) = entries[(i*n + j)*n + k].
  /// Entries must be symmetric under index permutation to 1e-12 relative.
  static SymTensor3 dense(Eigen::Index n, std::vector<double> entries) {
    check_dense_capacity(n);
    if (static_cast<Eigen::Index>(entries.size()) != n * n * n) {
      throw DimensionError("SymTensor3::dense: expected n^3 entries");
    }
    SymTensor3 t;
    t.n_ = n;
    t.is_dense_ = true;
    t.dense_ = std::move(entries);
    double scale = 0.0;
    for (double v : t.dense_) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1e-300);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        for (Eigen::Index k = j; k < n; ++k) {
          const double v = t.at(i, j, k);
          if (std::abs(v - t.at(i, k, j)) > tol || std::abs(v - t.at(j, i, k)) > tol ||
              std::abs(v - t.at(j, k, i)) > tol || std::abs(v - t.at(k, i, j)) > tol ||
              std::abs(v - t.at(k, j, i)) > tol) {
            throw InvalidArgument("SymTensor3::dense: entries are not symmetric");
          }
        }
      }
    }
    return t;
  }

  /// Σ_j weights(j) · rows.row(j)^{⊗3}.
  static SymTensor3 rank_one_sum(Matrix rows, Vector weights) {
    if (rows.rows() != weights.size()) {
      throw DimensionError("SymTensor3::rank_one_sum: rows/weights size mismatch");
    }
    SymTensor3 t;
    t.n_ = rows.cols();
    t.rows_ = std::move(rows);
    t.weights_ = std::move(weights);
    return t;
  }

  Eigen::Index dim() const { return n_; }
  bool is_dense() const { return is_dense_; }
  /// Number of rank-one terms (0 for dense storage).
  Eigen::Index terms() const { return is_dense_ ? 0 : rows_.rows(); }

  double at(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    if (is_dense_) return dense_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
    double v = 0.0;
    for (Eigen::Index r = 0; r < rows_.rows(); ++r) {
      v += weights_(r) * rows_(r, i) * rows_(r, j) * rows_(r, k);
    }
    return v;
  }

  /// T[s]: the symmetric matrix with entries Σ_k T(i,j,k) s_k.
  Matrix apply(const Vector& s) const {
    require_same_dim(s.size(), n_, "SymTensor3::apply");
    if (is_dense_) {
      Matrix m(n_, n_);
      for (Eigen::Index i = 0; i < n_; ++i) {
        for (Eigen::Index j = 0; j < n_; ++j) {
          const double* row = &dense_[static_cast<std::size_t>((i * n_ + j) * n_)];
          double acc = 0.0;
          for (Eigen::Index k = 0; k < n_; ++k) acc += row[k] * s(k);
          m(i, j) = acc;
        }
      }
      return m;
    }
    if (rows_.rows() == 0) return Matrix::Zero(n_, n_);
    const Vector c = weights_.cwiseProduct(rows_ * s);
    return rows_.transpose() * c.asDiagonal() * rows_;
  }

  /// T[s]²: the vector Σ_{j,k} T(i,j,k) s_j s_k.
  Vector apply2(const Vector& s) const {
    require_same_dim(s.size(), n_, "SymTensor3::apply2");
    if (is_dense_) return apply(s) * s;
    if (rows_.rows() == 0) return Vector::Zero(n_);
    const Vector proj = rows_ * s;
    const Vector c = weights_.cwiseProduct(proj.cwiseProduct(proj));
    return rows_.transpose() * c;
  }

  /// T[s]³.
  double apply3(const Vector& s) const {
    require_same_dim(s.size(), n_, "SymTensor3::apply3");
    if (is_dense_) return s.dot(apply2(s));
    if (rows_.rows() == 0) return 0.0;
    const Vector proj = rows_ * s;
    return weights_.dot(proj.cwiseProduct(proj).cwiseProduct(proj));
  }

  SymTensor3 to_dense() const {
    if (is_dense_) return *this;
    check_dense_capacity(n_);
    std::vector<double> e(static_cast<std::size_t>(n_ * n_ * n_), 0.0);
    for (Eigen::Index r = 0; r < rows_.rows(); ++r) {
      const double w = weights_(r);
      if (w == 0.0) continue;
      for (Eigen::Index i = 0; i < n_; ++i) {
        const double wi = w * rows_(r, i);
        for (Eigen::Index j = 0; j < n_; ++j) {
          const double wij = wi * rows_(r, j);
          double* out = &e[static_cast<std::size_t>((i * n_ + j) * n_)];
          for (Eigen::Index k = 0; k < n_; ++k) out[k] += wij * rows_(r, k);
        }
      }
    }
    SymTensor3 t;
    t.n_ = n_;
    t.is_dense_ = true;
    t.dense_ = std::move(e);
    return t;
  }

  SymTensor3 scaled(double factor) const {
    SymTensor3 t = *this;
    if (is_dense_) {
      for (double& v : t.dense_) v *= factor;
    } else {
      t.weights_ *= factor;
    }
    return t;
  }

  /// a + b. Rank-one sums concatenate; anything involving a dense operand is dense.
  friend SymTensor3 operator+(const SymTensor3& a, const SymTensor3& b) {
    require_same_dim(a.n_, b.n_, "SymTensor3::operator+");
    if (!a.is_dense_ && !b.is_dense_) {
      Matrix rows(a.rows_.rows() + b.rows_.rows(), a.n_);
      rows << a.rows_, b.rows_;
      Vector w(a.weights_.size() + b.weights_.size());
      w << a.weights_, b.weights_;
      return rank_one_sum(std::move(rows), std::move(w));
    }
    SymTensor3 out = a.to_dense();
    const SymTensor3 bd = b.to_dense();
    for (std::size_t i = 0; i < out.dense_.size(); ++i) out.dense_[i] += bd.dense_[i];
    return out;
  }

  friend SymTensor3 operator-(const SymTensor3& a, const SymTensor3& b) { return a + b.scaled(-1.0); }

 private:
  static void check_dense_capacity(Eigen::Index n) {
    if (n > kMaxDenseTensorDim) {
      throw CapacityError("dense third-order tensor requested for n = " + std::to_string(n) +
                          " > " + std::to_string(kMaxDenseTensorDim));
    }
  }

  Eigen::Index n_ = 0;
  bool is_dense_ = false;
  std::vector<double> dense_;
  Matrix rows_;
  Vector weights_;
};

/// Free-function spellings of the contractions.
inline Matrix t3_apply(const SymTensor3& t, const Vector& s) { return t.apply(s); }
inline Vector t3_apply2(const SymTensor3& t, const Vector& s) { return t.apply2(s); }
inline double t3_apply3(const SymTensor3& t, const Vector& s) { return t.apply3(s); }

}  // namespace tensoropt
