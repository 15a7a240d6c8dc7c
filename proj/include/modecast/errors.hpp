#pragma once

#include <stdexcept>
#include <string>

namespace modecast {

enum class ErrorKind {
  invalid_signal,
  too_short,
  shape,
  degenerate_mode,
  state,
  spec,
  degenerate_scale,
  empty_batch,
  training_diverged,
  zero_variance,
  io,
  parse,
  empty_series,
  incompatible_checkpoint,
  corrupt_checkpoint,
};

/// Library-wide exception. kind() is stable and drives the CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace modecast
