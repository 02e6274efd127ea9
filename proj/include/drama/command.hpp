#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drama/config.hpp"

namespace drama {

enum class CommandKind { act, pre };

/// One DRAM command and the idle time before the next command is issued.
struct Command {
  CommandKind kind = CommandKind::pre;
  Row row = 0;  // meaningful for ACT only
  Duration gap_after{0};

  static Command act(Row row, Duration gap) { return {CommandKind::act, row, gap}; }
  static Command pre(Duration gap) { return {CommandKind::pre, 0, gap}; }

  bool is_act() const noexcept { return kind == CommandKind::act; }
  bool is_pre() const noexcept { return kind == CommandKind::pre; }

  friend bool operator==(const Command&, const Command&) = default;
};

using CommandTrace = std::vector<Command>;

/// Text form: `ACT <row> gap=<int>` or `PRE gap=<int>`, gaps in picoseconds.
/// `#` starts a comment; blank lines are ignored.
std::string format_command(const Command& cmd);
std::optional<Command> parse_command_line(std::string_view line, std::size_t line_no);

CommandTrace parse_trace(std::istream& in);
CommandTrace parse_trace(std::string_view text);
void emit_trace(std::ostream& out, const CommandTrace& trace);
std::string emit_trace(const CommandTrace& trace);

/// Trace time: the sum of all gaps.
Duration trace_duration(const CommandTrace& trace);

}  // namespace drama
