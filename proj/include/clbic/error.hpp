#pragma once

#include <stdexcept>

namespace clbic {

// Malformed or inconsistent input: bad matrices, unreadable files, invalid specs.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical routine could not produce a usable result.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace clbic
