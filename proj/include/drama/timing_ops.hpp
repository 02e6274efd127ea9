#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drama/command.hpp"
#include "drama/config.hpp"

namespace drama {

/// Rows reserved for majority logic. r1, r2, r3 must carry low-order bits
/// 01, 10, 00 with identical high-order bits; c0/c1 hold constant 0/1.
struct ComputeRows {
  Row r1 = 0;
  Row r2 = 0;
  Row r3 = 0;
  Row c0 = 0;
  Row c1 = 0;

  /// Places the majority triple in the 4-row group starting at `group_base`
  /// (must be a multiple of 4); the spare 11 slot becomes c0.
  static ComputeRows in_group(Row group_base, Row c1);
};

/// Returns a description of the first violated constraint, or nullopt.
/// With `rows_per_subarray` > 0 also checks that every row is in range.
std::optional<std::string> check_row_constraints(const ComputeRows& rows,
                                                 std::size_t rows_per_subarray = 0);

/// ACT(source) PRE(truncated) ACT(target). Throws noop_copy if equal.
CommandTrace cpy(Row target, Row source, const TimingModel& timing);

/// ACT(r1) PRE ACT(r2) at minimal gaps; opens r1, r2, r3 together. Throws
/// address_constraint when `rows` violate the address rule.
CommandTrace majority3(const ComputeRows& rows, const TimingModel& timing);
/// Same trace as majority3; the caller preloaded r1 from c0.
inline CommandTrace and3(const ComputeRows& rows, const TimingModel& timing) {
  return majority3(rows, timing);
}
/// Same trace as majority3; the caller preloaded r1 from c1.
inline CommandTrace or3(const ComputeRows& rows, const TimingModel& timing) {
  return majority3(rows, timing);
}

/// Assembles fragments into a well-formed trace: a nominal PRE is inserted
/// before every fragment that follows an open row, and the preset row (r1)
/// is tracked so that a stale preset is reported.
class ProgramBuilder {
 public:
  ProgramBuilder(const TimingModel& timing, const ComputeRows& rows);

  /// Nominal PRE. Leading PREs close whatever a previous program left open.
  ProgramBuilder& precharge();
  /// Fully timed single-row ACT (readout).
  ProgramBuilder& activate(Row row);
  ProgramBuilder& cpy(Row target, Row source);
  /// r1 must hold 0 (copied from c0 since the last majority).
  ProgramBuilder& and3();
  /// r1 must hold 1 (copied from c1 since the last majority).
  ProgramBuilder& or3();

  const ComputeRows& rows() const noexcept { return rows_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const CommandTrace& trace() const noexcept { return trace_; }
  CommandTrace take() { return std::move(trace_); }

 private:
  enum class Preset { unknown, zero, one };

  void close_if_open();
  void append(const CommandTrace& fragment);
  void majority(Preset required, const char* name);

  TimingModel timing_;
  ComputeRows rows_;
  CommandTrace trace_;
  Preset preset_ = Preset::unknown;
  std::vector<std::string> warnings_;
};

}  // namespace drama
