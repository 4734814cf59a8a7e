#pragma once
#include <stdexcept>
#include <string>

namespace bvs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a 0-based character offset.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

/// Problems with input data or with a design built from it.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Cholesky of the model's Gram submatrix failed the pivot test.
class SingularModel : public Error {
  public:
    using Error::Error;
};

/// Not enough observations for the model: n <= p0 + pγ.
class InsufficientData : public Error {
  public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its refinement budget.
class QuadratureError : public Error {
  public:
    QuadratureError(const std::string& msg, double error_bound)
        : Error(msg + " (achieved relative error bound " + std::to_string(error_bound) + ")"),
          error_bound_(error_bound) {}
    double error_bound() const { return error_bound_; }

  private:
    double error_bound_;
};

/// Invalid arguments or option combinations supplied by a caller.
class UsageError : public Error {
  public:
    using Error::Error;
};

}  // namespace bvs
