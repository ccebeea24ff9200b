#ifndef UOCO_TYPES_HPP_
#define UOCO_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace uoco {

/// Dense decision vector in R^d. Every decision, gradient and comparator uses it.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::string where, Eigen::Index got, Eigen::Index expected)
      : Error(where + ": dimension " + std::to_string(got) + ", expected " +
              std::to_string(expected)) {}
};

/// An iterative solver stopped before reaching its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(std::string what, double residual)
      : Error(std::move(what) + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Inputs breach a stated bound (typically a misconfigured G or D).
class RangeViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InfeasibleFamily : public Error {
 public:
  using Error::Error;
};

/// A gradient oracle or loss evaluator failed during a round.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace uoco

#endif  // UOCO_TYPES_HPP_
