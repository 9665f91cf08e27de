#pragma once

#include <stdexcept>
#include <string>

namespace qcosym {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value computed during evaluation was NaN or infinite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A linear solve or closed-form expression hit a singular configuration.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Requested nested differentiation beyond what the field evaluators carry.
class DepthError : public Error {
 public:
  using Error::Error;
};

class IntegratorError : public Error {
 public:
  enum class Kind { step_underflow, max_steps, non_finite };

  IntegratorError(Kind kind, double t, const std::string& what)
      : Error(what), kind_(kind), t_(t) {}

  Kind kind() const { return kind_; }
  double time() const { return t_; }

 private:
  Kind kind_;
  double t_;
};

/// The FitzHugh-Nagumo fast nullcline x - x^3/3 - y = 0 was hit where the
/// generating-function gradient must be divided by it.
class NullclineError : public Error {
 public:
  NullclineError(double t, double x, double y, double f)
      : Error("nullcline |x - x^3/3 - y| = " + std::to_string(f) + " below guard at t = " +
              std::to_string(t) + " (x = " + std::to_string(x) + ", y = " + std::to_string(y) +
              ")"),
        t_(t), x_(x), y_(y) {}

  double time() const { return t_; }
  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double t_, x_, y_;
};

/// Fold of the critical manifold (x = +-1) reached by the fast-reduced flow.
class FoldError : public Error {
 public:
  FoldError(double x, const std::string& what) : Error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

}  // namespace qcosym
