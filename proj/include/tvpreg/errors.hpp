#pragma once

#include <stdexcept>
#include <string>

namespace tvpreg {

// bad inputs: dimensions, domains, malformed configuration
class InvalidArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// runtime numerical failure (non-PD precision block, degenerate scale, ...)
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tvpreg
