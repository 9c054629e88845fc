#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// Invalid parameters or configuration (bad ξ, unknown preset, malformed config file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownPreset : public ConfigError {
 public:
  explicit UnknownPreset(const std::string& name) : ConfigError("unknown preset: " + name) {}
};

/// The guidance law is singular at a zero of the wave function.
class NodeEncountered : public std::runtime_error {
 public:
  NodeEncountered(double x, double t, double density);

  double x() const noexcept { return x_; }
  double t() const noexcept { return t_; }
  double density() const noexcept { return density_; }

 private:
  double x_;
  double t_;
  double density_;
};

/// A record does not span enough time for the requested diagnostic.
class TooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bohm
