#pragma once

#include "tensoropt/core/types.hpp"

#include <stdexcept>
#include <string>

namespace tensoropt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Derivative requested where the function is not differentiable.
class NonsmoothPointError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

// Inner solver hit its iteration cap. Carries the best iterate found.
class SubsolverFailure : public Error {
 public:
  SubsolverFailure(const std::string& what, Vector best, double residual)
      : Error(what), best_(std::move(best)), residual_(residual) {}

  const Vector& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vector best_;
  double residual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace tensoropt
