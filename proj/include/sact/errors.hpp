#ifndef SACT_ERRORS_HPP
#define SACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sact {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/layer shapes do not compose.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (unknown name, unsupported setting).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// An API was used against its contract (stale cache, mismatched lengths).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A data file could not be ingested; the message names the file.
class IngestionError : public Error {
 public:
  using Error::Error;
};

// Too few usable observations for a statistical test.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Training aborted (non-finite loss); the message names the layer/step.
class TrainingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sact

#endif  // SACT_ERRORS_HPP
