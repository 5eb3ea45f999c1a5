#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace levylab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidAlpha : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidExponent : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidGrid : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NonFiniteDensity : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

class NegativeDensity : public Error {
 public:
  using Error::Error;
};

class Con1Violation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when an adaptive scheme cannot reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double achieved_error)
      : Error(what + " (achieved error " + std::to_string(achieved_error) + ")"),
        achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// Non-fatal diagnostics (NonHermitianSymbol, InterpolationDegradation, ...)
// go through a process-wide sink. The default sink discards them.
using WarningSink = std::function<void(const std::string& code, const std::string& message)>;

/// Installs a sink and returns the previous one. Thread-safe.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& code, const std::string& message);

}  // namespace levylab
