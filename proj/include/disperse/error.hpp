#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disperse {

enum class ErrorKind {
  invalid_input,
  invalid_parameter,
  domain_too_small,
  under_resolved,
  untrusted_window,
  overflow,
  blow_up_suspected,
  hypothesis_violation,
  cutoff_exceeds_box,
  invalid_window,
  grid_mismatch,
  out_of_range,
  config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this one exception type; the
/// kind is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace disperse
