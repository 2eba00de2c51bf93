#pragma once

#include <stdexcept>
#include <string>

namespace superrad {

/// Invalid or incomplete configuration (unknown key, bad unit, violated invariant).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrator could not make progress, or the state left the physical set.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}

  /// Last time (µs) at which the state was known to be valid.
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// The generator has no strictly decaying eigenmode, so no asymptotic decay rate exists.
class NoDecayError : public std::runtime_error {
 public:
  NoDecayError() : std::runtime_error("no decay channel: generator has no decaying eigenvalue") {}
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superrad
