#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drama {

enum class ErrorCode {
  address_fault,
  protocol_fault,
  undefined_timing,
  no_open_row,
  length_mismatch,
  address_constraint,
  noop_copy,
  layout_fault,
  mode_required,
  mode_mismatch,
  encoding_fault,
  empty_db,
  empty_trace,
  negative_gap,
  zero_latency,
  parse_error,
  config_error,
  io_error,
  usage_error,
};

std::string_view to_string(ErrorCode code);

/// Every fault raised by the simulator carries a stable, greppable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace drama
