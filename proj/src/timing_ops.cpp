#include "drama/timing_ops.hpp"

#include "drama/error.hpp"

namespace drama {

ComputeRows ComputeRows::in_group(Row group_base, Row c1) {
  return ComputeRows{group_base + 1, group_base + 2, group_base, group_base + 3, c1};
}

std::optional<std::string> check_row_constraints(const ComputeRows& rows,
                                                 std::size_t rows_per_subarray) {
  if (rows.r1 == rows.r2 || rows.r1 == rows.r3 || rows.r2 == rows.r3) {
    return "r1, r2, r3 must be pairwise distinct";
  }
  if ((rows.r1 & 3U) != 1U) return "r1 must end in 01";
  if ((rows.r2 & 3U) != 2U) return "r2 must end in 10";
  if ((rows.r3 & 3U) != 0U) return "r3 must end in 00";
  if ((rows.r1 >> 2) != (rows.r2 >> 2) || (rows.r1 >> 2) != (rows.r3 >> 2)) {
    return "r1, r2, r3 must share their high-order address bits";
  }
  if (rows.c0 == rows.c1) return "c0 and c1 must differ";
  for (Row c : {rows.c0, rows.c1}) {
    if (c == rows.r1 || c == rows.r2 || c == rows.r3) {
      return "constant rows must not overlap the majority rows";
    }
  }
  if (rows_per_subarray > 0) {
    for (Row r : {rows.r1, rows.r2, rows.r3, rows.c0, rows.c1}) {
      if (r >= rows_per_subarray) return "row " + std::to_string(r) + " out of range";
    }
  }
  return std::nullopt;
}

CommandTrace cpy(Row target, Row source, const TimingModel& timing) {
  if (target == source) {
    fail(ErrorCode::noop_copy, "row copy with target == source (" + std::to_string(target) + ")");
  }
  return {Command::act(source, timing.t_ras), Command::pre(timing.t_copy_gap),
          Command::act(target, timing.t_ras)};
}

CommandTrace majority3(const ComputeRows& rows, const TimingModel& timing) {
  if (auto why = check_row_constraints(rows)) fail(ErrorCode::address_constraint, *why);
  return {Command::act(rows.r1, timing.t_multi_gap), Command::pre(timing.t_multi_gap),
          Command::act(rows.r2, timing.t_ras)};
}

ProgramBuilder::ProgramBuilder(const TimingModel& timing, const ComputeRows& rows)
    : timing_(timing), rows_(rows) {
  if (auto why = check_row_constraints(rows)) fail(ErrorCode::address_constraint, *why);
}

void ProgramBuilder::close_if_open() {
  if (!trace_.empty() && trace_.back().is_act()) trace_.push_back(Command::pre(timing_.t_rp));
}

void ProgramBuilder::append(const CommandTrace& fragment) {
  trace_.insert(trace_.end(), fragment.begin(), fragment.end());
}

ProgramBuilder& ProgramBuilder::precharge() {
  trace_.push_back(Command::pre(timing_.t_rp));
  return *this;
}

ProgramBuilder& ProgramBuilder::activate(Row row) {
  close_if_open();
  trace_.push_back(Command::act(row, timing_.t_ras));
  return *this;
}

ProgramBuilder& ProgramBuilder::cpy(Row target, Row source) {
  close_if_open();
  append(drama::cpy(target, source, timing_));
  if (target == rows_.r1) {
    preset_ = source == rows_.c0 ? Preset::zero : source == rows_.c1 ? Preset::one : Preset::unknown;
  }
  return *this;
}

void ProgramBuilder::majority(Preset required, const char* name) {
  if (preset_ != required) {
    warnings_.push_back(std::string("stale preset before ") + name + ": r1 not reloaded from " +
                        (required == Preset::zero ? "c0" : "c1") + " since the last majority");
  }
  close_if_open();
  append(majority3(rows_, timing_));
  preset_ = Preset::unknown;
}

ProgramBuilder& ProgramBuilder::and3() {
  majority(Preset::zero, "AND");
  return *this;
}

ProgramBuilder& ProgramBuilder::or3() {
  majority(Preset::one, "OR");
  return *this;
}

}  // namespace drama
