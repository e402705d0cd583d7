#pragma once

#include <stdexcept>
#include <string>

namespace mmsim {

/// Coarse error classes; the CLI maps these onto stable exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kValidation,
  kParse,
  kIo,
  kNotFound,
  kDimensionMismatch,
  kOutOfRange,
};

/// Exception carrying the originating module tag (e.g. "dsp", "raytrace").
class Error : public std::runtime_error {
 public:
  Error(std::string module, ErrorKind kind, const std::string& message)
      : std::runtime_error("[" + module + "] " + message), module_(std::move(module)), kind_(kind) {}

  const std::string& module() const noexcept { return module_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string module_;
  ErrorKind kind_;
};

}  // namespace mmsim
