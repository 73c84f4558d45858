#pragma once

#include <stdexcept>
#include <string>

namespace pointgen {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration, bad CLI arguments, missing paths. CLI exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Zero-extent clouds and other inputs with no usable geometry.
class DegenerateGeometryError : public Error {
 public:
  explicit DegenerateGeometryError(const std::string& what) : Error(what) {}
};

// Non-finite loss or gradient during training; carries the step index.
class TrainingDivergenceError : public Error {
 public:
  TrainingDivergenceError(const std::string& what, long long step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

// Database was built with a different descriptor encoder than the one querying.
class StaleDatabaseError : public Error {
 public:
  explicit StaleDatabaseError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace pointgen
