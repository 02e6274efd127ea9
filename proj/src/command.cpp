#include "drama/command.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "drama/error.hpp"

namespace drama {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  fail(ErrorCode::parse_error, "trace line " + std::to_string(line_no) + ": " + why);
}

template <typename T>
T parse_int(std::string_view text, std::size_t line_no, const char* what) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    bad_line(line_no, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return out;
}

Duration parse_gap(std::string_view token, std::size_t line_no) {
  if (!token.starts_with("gap=")) bad_line(line_no, "expected gap=<int>");
  return Duration{parse_int<std::int64_t>(token.substr(4), line_no, "gap")};
}

}  // namespace

std::string format_command(const Command& cmd) {
  std::string out;
  if (cmd.is_act()) {
    out = "ACT " + std::to_string(cmd.row) + " gap=";
  } else {
    out = "PRE gap=";
  }
  out += std::to_string(cmd.gap_after.count());
  return out;
}

std::optional<Command> parse_command_line(std::string_view line, std::size_t line_no) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  line = trim(line);
  if (line.empty()) return std::nullopt;

  std::vector<std::string_view> tokens;
  while (!line.empty()) {
    const auto space = line.find_first_of(" \t");
    tokens.push_back(line.substr(0, space));
    if (space == std::string_view::npos) break;
    line = trim(line.substr(space));
  }

  if (tokens[0] == "ACT") {
    if (tokens.size() != 3) bad_line(line_no, "expected: ACT <row> gap=<int>");
    const auto row = parse_int<Row>(tokens[1], line_no, "row");
    return Command::act(row, parse_gap(tokens[2], line_no));
  }
  if (tokens[0] == "PRE") {
    if (tokens.size() != 2) bad_line(line_no, "expected: PRE gap=<int>");
    return Command::pre(parse_gap(tokens[1], line_no));
  }
  bad_line(line_no, "unknown command '" + std::string(tokens[0]) + "'");
}

CommandTrace parse_trace(std::istream& in) {
  CommandTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto cmd = parse_command_line(line, line_no)) trace.push_back(*cmd);
  }
  return trace;
}

CommandTrace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

void emit_trace(std::ostream& out, const CommandTrace& trace) {
  for (const auto& cmd : trace) out << format_command(cmd) << '\n';
}

std::string emit_trace(const CommandTrace& trace) {
  std::ostringstream out;
  emit_trace(out, trace);
  return out.str();
}

Duration trace_duration(const CommandTrace& trace) {
  Duration total{0};
  for (const auto& cmd : trace) total += cmd.gap_after;
  return total;
}

}  // namespace drama
