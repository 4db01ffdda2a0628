#pragma once

#include <stdexcept>
#include <string>

namespace intdim {

/// Invalid arguments: dimension mismatch, violated preconditions, bad specs.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// The data does not support an estimate (empty balls, no pairs, zero volume hits).
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace intdim
