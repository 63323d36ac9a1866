#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coldbench/detection/types.hpp"

namespace coldbench::detection {

// Line-oriented replay format, one record per line:
//
//   <t_ms> door_open
//   <t_ms> door_close
//   <t_ms> reading <pos> <value>
//   <t_ms> recognized [act=<id>] <name...>
//
// '#' starts a comment; blank lines are ignored.

struct DoorOpened {
  bool operator==(const DoorOpened&) const = default;
};
struct DoorClosed {
  bool operator==(const DoorClosed&) const = default;
};
struct Reading {
  Position position = 0;
  double value = 0.0;
  bool operator==(const Reading&) const = default;
};
struct Recognized {
  std::string name;
  /// Absent means "the activity in effect when the line is replayed".
  std::optional<ActivityId> activity;
  bool operator==(const Recognized&) const = default;
};

struct TraceRecord {
  Millis timestamp = 0;
  std::variant<DoorOpened, DoorClosed, Reading, Recognized> body;
  bool operator==(const TraceRecord&) const = default;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<TraceRecord> parse_trace(std::string_view text);
std::vector<TraceRecord> read_trace_file(const std::string& path);

std::string format_record(const TraceRecord& record);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);
std::string format_trace(const std::vector<TraceRecord>& records);

}  // namespace coldbench::detection
