#pragma once

#include <stdexcept>
#include <string>

namespace filmctl {

// Every error raised by the library carries a stable class name so the CLI
// can report it on a single machine-parsable line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual const char* kind() const noexcept { return "Error"; }
};

#define FILMCTL_ERROR_CLASS(Name)                                            \
  class Name : public Error {                                                \
   public:                                                                   \
    using Error::Error;                                                      \
    [[nodiscard]] const char* kind() const noexcept override { return #Name; } \
  }

FILMCTL_ERROR_CLASS(InvalidArgument);
FILMCTL_ERROR_CLASS(NonStabilisable);
FILMCTL_ERROR_CLASS(IllConditioned);
FILMCTL_ERROR_CLASS(InsufficientActuators);
FILMCTL_ERROR_CLASS(InsufficientData);
FILMCTL_ERROR_CLASS(NumericalFailure);
FILMCTL_ERROR_CLASS(IoError);
FILMCTL_ERROR_CLASS(BlowUp);
FILMCTL_ERROR_CLASS(NewtonFailure);

#undef FILMCTL_ERROR_CLASS

// Configuration problems name the offending key or line.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  [[nodiscard]] const char* kind() const noexcept override { return "ConfigError"; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace filmctl
