#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace semigeo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Parse failure; `position` is the 0-based character offset in the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public Error {
 public:
  using Error::Error;
};

class VariableOutOfRange : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// |det g| fell below the tolerance; `point` holds the offending coordinates.
class DegenerateMetric : public Error {
 public:
  DegenerateMetric(const std::string& what, std::vector<double> point,
                   double det)
      : Error(what), point_(std::move(point)), det_(det) {}
  const std::vector<double>& point() const { return point_; }
  double determinant() const { return det_; }

 private:
  std::vector<double> point_;
  double det_;
};

class NotSemigeodesic : public Error {
 public:
  using Error::Error;
};

class InvalidInit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace semigeo
