#include "drama/subarray.hpp"

#include <string>

#include "drama/error.hpp"

namespace drama {

BitlineLevel share_charge(std::span<const bool> opened_cells) {
  int sum = 0;
  for (bool c : opened_cells) sum += c ? 1 : -1;
  if (sum > 0) return BitlineLevel::half_plus_delta;
  if (sum < 0) return BitlineLevel::half_minus_delta;
  return BitlineLevel::half;
}

BitlineLevel sense(BitlineLevel shared) {
  switch (shared) {
    case BitlineLevel::half_plus_delta:
    case BitlineLevel::full:
      return BitlineLevel::full;
    case BitlineLevel::half_minus_delta:
    case BitlineLevel::zero:
      return BitlineLevel::zero;
    case BitlineLevel::half:
      break;
  }
  fail(ErrorCode::protocol_fault, "sense amplifier enabled on an undeviated bitline");
}

MicroOp detect_micro_op(std::span<const Command> window, const TimingModel& timing) {
  if (window.size() < 3) return MicroOp::none;
  const auto& first = window[window.size() - 3];
  const auto& pre = window[window.size() - 2];
  const auto& second = window[window.size() - 1];
  if (!first.is_act() || !pre.is_pre() || !second.is_act()) return MicroOp::none;

  const Duration act_gap = first.gap_after;
  const Duration pre_gap = pre.gap_after;
  const bool act_nominal = act_gap >= timing.t_ras;
  const bool act_minimal = act_gap <= timing.t_multi_gap;
  const bool pre_nominal = pre_gap >= timing.t_rp;
  const bool pre_truncated = pre_gap <= timing.t_copy_gap;
  const bool pre_minimal = pre_gap <= timing.t_multi_gap;

  if (act_nominal && pre_nominal) return MicroOp::none;
  if (act_nominal && pre_truncated) return MicroOp::row_copy;
  if (act_minimal && pre_minimal) return MicroOp::multi_activate;
  return MicroOp::ambiguous;
}

std::array<Row, 3> multi_activate_rows(Row first, Row second) {
  if ((first & 3U) != 1U || (second & 3U) != 2U || (first >> 2) != (second >> 2)) {
    fail(ErrorCode::address_constraint,
         "multi-row activation needs rows with low bits 01 then 10 and equal high bits, got " +
             std::to_string(first) + " then " + std::to_string(second));
  }
  return {first, second, static_cast<Row>(first & ~Row{3})};
}

RefreshTracker::RefreshTracker(std::size_t rows, std::size_t cols, Duration refresh_interval)
    : last_(rows, Timestamp{0}), ever_(rows, false), cols_(cols), refresh_interval_(refresh_interval) {}

CoverageReport refresh_coverage(const RefreshTracker& tracker, std::span<const Row> rows,
                                Timestamp t0, Timestamp t1) {
  CoverageReport report;
  for (Row r : rows) {
    if (r >= tracker.rows()) fail(ErrorCode::address_fault, "coverage row out of range");
    const bool hit = tracker.activated(r) && tracker.last_activation(r) >= t0 &&
                     tracker.last_activation(r) <= t1;
    report.rows.push_back(r);
    report.covered.push_back(hit);
    report.total_cells += tracker.cols();
    if (hit) report.covered_cells += tracker.cols();
  }
  return report;
}

Subarray::Subarray(std::size_t rows, std::size_t cols, TimingModel timing)
    : cols_(cols),
      timing_(timing),
      cells_(rows, BitVector(cols)),
      row_buffer_(cols),
      tracker_(rows, cols, timing.refresh_interval) {
  if (rows == 0 || cols == 0) fail(ErrorCode::config_error, "subarray needs rows and columns");
  window_.reserve(3);
}

void Subarray::check_row(Row row) const {
  if (row >= cells_.size()) {
    fail(ErrorCode::address_fault,
         "row " + std::to_string(row) + " out of range (rows=" + std::to_string(cells_.size()) + ")");
  }
}

void Subarray::apply(const Command& cmd) {
  if (cmd.gap_after < Duration{0}) fail(ErrorCode::negative_gap, "negative command gap");
  if (window_.size() == 3) window_.erase(window_.begin());
  window_.push_back(cmd);
  if (cmd.is_act()) {
    activate(cmd);
  } else {
    precharge(cmd);
  }
  clock_ += cmd.gap_after;
}

void Subarray::execute(std::span<const Command> trace) {
  for (const auto& cmd : trace) apply(cmd);
}

void Subarray::activate(const Command& cmd) {
  check_row(cmd.row);
  if (phase_ == BitlinePhase::sharing) {
    fail(ErrorCode::protocol_fault, "ACT issued while bitlines are still sharing charge");
  }
  if (!open_rows_.empty()) {
    fail(ErrorCode::protocol_fault, "ACT " + std::to_string(cmd.row) + " issued to an open subarray");
  }

  MicroOp op = detect_micro_op(window_, timing_);
  if (op == MicroOp::ambiguous) {
    if (timing_.undefined_timing == UndefinedTimingPolicy::strict) {
      fail(ErrorCode::undefined_timing,
           "ACT-PRE-ACT gaps fall between the nominal and truncated windows");
    }
    op = MicroOp::none;
  }
  // Copy and majority need the truncated PRE to have left the bitlines
  // undisturbed; otherwise the precharge completed and this is a plain ACT.
  if (op != MicroOp::none && phase_ != BitlinePhase::resolved) op = MicroOp::none;

  phase_ = BitlinePhase::sharing;
  open_rows_.clear();
  switch (op) {
    case MicroOp::none:
    case MicroOp::ambiguous:
      row_buffer_ = cells_[cmd.row];
      open_rows_.push_back(cmd.row);
      break;
    case MicroOp::row_copy:
      // Sense amplifiers still drive the source values.
      cells_[cmd.row] = row_buffer_;
      open_rows_.push_back(cmd.row);
      break;
    case MicroOp::multi_activate: {
      const Row first = window_[window_.size() - 3].row;
      const auto rows = multi_activate_rows(first, cmd.row);
      for (Row r : rows) check_row(r);
      row_buffer_ = BitVector::majority(cells_[rows[0]], cells_[rows[1]], cells_[rows[2]]);
      for (Row r : rows) {
        cells_[r] = row_buffer_;
        open_rows_.push_back(r);
      }
      break;
    }
  }
  for (Row r : open_rows_) tracker_.touch(r, clock_);
  phase_ = BitlinePhase::resolved;
  last_micro_op_ = op;
}

void Subarray::precharge(const Command& cmd) {
  open_rows_.clear();
  if (phase_ == BitlinePhase::resolved && cmd.gap_after <= timing_.t_copy_gap) {
    // Interrupted precharge: wordlines drop, bitlines keep their values.
    return;
  }
  phase_ = BitlinePhase::precharged;
}

void Subarray::write_row(Row row, const BitVector& bits) {
  check_row(row);
  if (bits.size() != cols_) {
    fail(ErrorCode::length_mismatch, "write_row expects " + std::to_string(cols_) + " bits, got " +
                                         std::to_string(bits.size()));
  }
  if (!open_rows_.empty() || phase_ != BitlinePhase::precharged) {
    fail(ErrorCode::protocol_fault, "write_row requires a precharged subarray");
  }
  cells_[row] = bits;
  tracker_.touch(row, clock_);
  window_.clear();
}

const BitVector& Subarray::read_row_buffer() const {
  if (open_rows_.empty() || phase_ != BitlinePhase::resolved) {
    fail(ErrorCode::no_open_row, "row buffer read with no activated row");
  }
  return row_buffer_;
}

const BitVector& Subarray::peek_row(Row row) const {
  check_row(row);
  return cells_[row];
}

BitlineState Subarray::bitline(std::size_t col) const {
  if (col >= cols_) fail(ErrorCode::address_fault, "column out of range");
  switch (phase_) {
    case BitlinePhase::precharged:
      return {BitlinePhase::precharged, BitlineLevel::half};
    case BitlinePhase::sharing:
      return {BitlinePhase::sharing, BitlineLevel::half};
    case BitlinePhase::resolved:
      break;
  }
  return {BitlinePhase::resolved, row_buffer_.get(col) ? BitlineLevel::full : BitlineLevel::zero};
}

}  // namespace drama
