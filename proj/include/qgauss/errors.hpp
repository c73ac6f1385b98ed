#pragma once

#include <stdexcept>
#include <string>

namespace qgauss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative evaluation hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed, degenerate or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgauss
