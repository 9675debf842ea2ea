#pragma once

#include <stdexcept>
#include <string>

namespace stgain {

// Raised for malformed inputs and violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or missing input data (maps to CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace stgain
