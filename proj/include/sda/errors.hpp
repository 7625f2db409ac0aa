#pragma once

#include <stdexcept>
#include <string>

namespace sda {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or size mismatch between arrays.
struct DimensionError : Error {
  using Error::Error;
};

// Non-finite or otherwise invalid numeric input.
struct ValidationError : Error {
  using Error::Error;
};

// Bad files, bad labels, degenerate datasets.
struct DataError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// A training run produced a non-finite loss.
struct DivergedError : Error {
  DivergedError(const std::string& what, int epoch_index)
      : Error(what), epoch(epoch_index) {}
  int epoch;
};

}  // namespace sda
