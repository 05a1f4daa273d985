#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated operation precondition (bad grid size, out-of-range parameter, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature gave up; carries the sub-interval that would not converge.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double lo, double hi)
      : Error(what + " on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypolab
