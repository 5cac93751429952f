#ifndef PASTA_ERRORS_HPP
#define PASTA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pasta {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite vectors, dimension mismatch, zero batch.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Schedule or preset parameters outside their admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Estimator used before it holds a valid previous estimate.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Prox requested with lambda <= rho.
class CurvatureError : public Error {
 public:
  using Error::Error;
};

class CertificationError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace pasta

#endif
