#ifndef HOLO3D_ERRORS_HPP
#define HOLO3D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holo3d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arrays, grids or plane lists that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range or otherwise invalid numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A metric whose normalizer is zero.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or file content supplied by the user.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two inputs that are individually valid but disagree (e.g. file header vs config).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(int iteration, const std::string& what)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace holo3d

#endif  // HOLO3D_ERRORS_HPP
