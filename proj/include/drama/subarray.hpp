#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "drama/bitvector.hpp"
#include "drama/command.hpp"
#include "drama/config.hpp"

namespace drama {

enum class BitlinePhase { precharged, sharing, resolved };

/// Symbolic bitline levels. `half` models V_DD/2; the +/- delta levels are the
/// transient deviation left by charge sharing; zero/full are sensed values.
enum class BitlineLevel { half, half_plus_delta, half_minus_delta, zero, full };

struct BitlineState {
  BitlinePhase phase = BitlinePhase::precharged;
  BitlineLevel level = BitlineLevel::half;
};

/// Symbolic result of sharing charge between a precharged bitline and the
/// given opened cells: the sign of sum(2c - 1). An even tie (never reached
/// with one or three cells) stays at half.
BitlineLevel share_charge(std::span<const bool> opened_cells);

/// Sense-amplifier resolution of a shared level.
BitlineLevel sense(BitlineLevel shared);

enum class MicroOp { none, row_copy, multi_activate, ambiguous };

/// Classifies the trailing ACT-PRE-ACT window. `window` holds up to the last
/// three commands, oldest first. Anything that is not ACT,PRE,ACT is `none`.
/// Returns `ambiguous` for gaps outside both the nominal and truncated
/// windows; the caller applies the undefined-timing policy.
MicroOp detect_micro_op(std::span<const Command> window, const TimingModel& timing);

/// Row set opened by a minimal-gap ACT(first) PRE ACT(second): the pair must
/// carry low bits 01 and 10 with equal high bits; the third row carries 00.
/// Throws address_constraint otherwise.
std::array<Row, 3> multi_activate_rows(Row first, Row second);

/// Per-row activation timestamps. Every cell in a row shares its row's
/// timestamp because activation is row-granular.
class RefreshTracker {
 public:
  RefreshTracker() = default;
  RefreshTracker(std::size_t rows, std::size_t cols, Duration refresh_interval);

  void touch(Row row, Timestamp when) { last_[row] = when; ever_[row] = true; }

  bool activated(Row row) const { return ever_[row]; }
  /// Undefined if the row was never activated; check activated() first.
  Timestamp last_activation(Row row) const { return last_[row]; }
  Timestamp last_activation(Row row, std::size_t /*col*/) const { return last_[row]; }

  Duration refresh_interval() const { return refresh_interval_; }
  std::size_t rows() const { return last_.size(); }
  std::size_t cols() const { return cols_; }

 private:
  std::vector<Timestamp> last_;
  std::vector<bool> ever_;
  std::size_t cols_ = 0;
  Duration refresh_interval_{0};
};

struct CoverageReport {
  std::vector<Row> rows;
  std::vector<bool> covered;  // parallel to rows
  std::size_t covered_cells = 0;
  std::size_t total_cells = 0;

  double fraction() const {
    return total_cells == 0 ? 1.0
                            : static_cast<double>(covered_cells) / static_cast<double>(total_cells);
  }
};

/// Which cells in `rows` were activated within [t0, t1].
CoverageReport refresh_coverage(const RefreshTracker& tracker, std::span<const Row> rows,
                                Timestamp t0, Timestamp t1);

/// A single unmodified DRAM subarray driven only by ACT/PRE commands.
///
/// Row-buffer semantics follow the command window:
///  - a fully timed ACT senses one row non-destructively;
///  - ACT(s) PRE(truncated) ACT(t) leaves the sensed values of s on the
///    bitlines and drives them into t (row copy);
///  - ACT(r1) PRE ACT(r2) with minimal gaps opens r1, r2 and their 00
///    sibling together; all three rows resolve to the column majority.
class Subarray {
 public:
  Subarray(std::size_t rows, std::size_t cols, TimingModel timing);

  std::size_t rows() const noexcept { return cells_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const TimingModel& timing() const noexcept { return timing_; }

  /// Issues one command at the current clock, then advances the clock by
  /// its gap.
  void apply(const Command& cmd);
  void execute(std::span<const Command> trace);

  /// Host-side data load. Equivalent to a write burst into an opened row; the
  /// subarray must be closed (precharged) and stays closed.
  void write_row(Row row, const BitVector& bits);

  /// Latched sense-amplifier values. Throws no_open_row when precharged.
  const BitVector& read_row_buffer() const;

  /// Debug view of stored cells; not a DRAM command and does not touch the
  /// refresh tracker.
  const BitVector& peek_row(Row row) const;

  BitlineState bitline(std::size_t col) const;
  BitlinePhase phase() const noexcept { return phase_; }
  std::span<const Row> open_rows() const noexcept { return open_rows_; }
  Timestamp clock() const noexcept { return clock_; }
  const RefreshTracker& tracker() const noexcept { return tracker_; }
  /// Micro-op applied by the most recent ACT.
  MicroOp last_micro_op() const noexcept { return last_micro_op_; }

 private:
  void check_row(Row row) const;
  void activate(const Command& cmd);
  void precharge(const Command& cmd);

  std::size_t cols_;
  TimingModel timing_;
  std::vector<BitVector> cells_;
  BitVector row_buffer_;
  std::vector<Row> open_rows_;
  BitlinePhase phase_ = BitlinePhase::precharged;
  RefreshTracker tracker_;
  Timestamp clock_{0};
  std::vector<Command> window_;  // last <= 3 commands, oldest first
  MicroOp last_micro_op_ = MicroOp::none;
};

}  // namespace drama
