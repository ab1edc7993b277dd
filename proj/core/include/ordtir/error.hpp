#pragma once

#include <stdexcept>

namespace ordtir {

/// Raised when input data (files, series, labels) cannot be used as given.
/// Configuration mistakes raise std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ordtir
