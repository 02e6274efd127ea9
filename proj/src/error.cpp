#include "drama/error.hpp"

namespace drama {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::address_fault: return "ADDRESS_FAULT";
    case ErrorCode::protocol_fault: return "PROTOCOL_FAULT";
    case ErrorCode::undefined_timing: return "UNDEFINED_TIMING";
    case ErrorCode::no_open_row: return "NO_OPEN_ROW";
    case ErrorCode::length_mismatch: return "LENGTH_MISMATCH";
    case ErrorCode::address_constraint: return "ADDRESS_CONSTRAINT";
    case ErrorCode::noop_copy: return "NOOP_COPY";
    case ErrorCode::layout_fault: return "LAYOUT_FAULT";
    case ErrorCode::mode_required: return "MODE_REQUIRED";
    case ErrorCode::mode_mismatch: return "MODE_MISMATCH";
    case ErrorCode::encoding_fault: return "ENCODING_FAULT";
    case ErrorCode::empty_db: return "EMPTY_DB";
    case ErrorCode::empty_trace: return "EMPTY_TRACE";
    case ErrorCode::negative_gap: return "NEGATIVE_GAP";
    case ErrorCode::zero_latency: return "ZERO_LATENCY";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::config_error: return "CONFIG_ERROR";
    case ErrorCode::io_error: return "IO_ERROR";
    case ErrorCode::usage_error: return "USAGE_ERROR";
  }
  return "UNKNOWN";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace drama
