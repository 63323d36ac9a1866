#include "coldbench/detection/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace coldbench::detection {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view next_token(std::string_view& rest) {
  rest = trim(rest);
  const auto end = rest.find_first_of(" \t");
  const auto token = rest.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  return token;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace

TraceParseError::TraceParseError(std::size_t line, const std::string& message)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<TraceRecord> parse_trace(std::string_view text) {
  std::vector<TraceRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string_view rest = line;
    const auto t = parse_number<Millis>(next_token(rest));
    if (!t) throw TraceParseError(line_no, "bad timestamp");
    const auto kind = next_token(rest);

    TraceRecord record{*t, DoorOpened{}};
    if (kind == "door_open") {
      record.body = DoorOpened{};
    } else if (kind == "door_close") {
      record.body = DoorClosed{};
    } else if (kind == "reading") {
      const auto pos = parse_number<Position>(next_token(rest));
      const auto value = parse_number<double>(next_token(rest));
      if (!pos || !value) throw TraceParseError(line_no, "reading needs <pos> <value>");
      if (*value < 0.0) throw TraceParseError(line_no, "negative reading");
      record.body = Reading{*pos, *value};
    } else if (kind == "recognized") {
      Recognized recognized;
      rest = trim(rest);
      if (rest.starts_with("act=")) {
        std::string_view act = next_token(rest).substr(4);
        const auto id = parse_number<ActivityId>(act);
        if (!id) throw TraceParseError(line_no, "bad act= value");
        recognized.activity = *id;
        rest = trim(rest);
      }
      if (rest.empty()) throw TraceParseError(line_no, "recognized needs a name");
      recognized.name = std::string(rest);
      record.body = std::move(recognized);
    } else {
      throw TraceParseError(line_no, "unknown record kind '" + std::string(kind) + "'");
    }
    if (!trim(rest).empty() && !std::holds_alternative<Recognized>(record.body)) {
      throw TraceParseError(line_no, "trailing fields");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_trace(buffer.str());
}

std::string format_record(const TraceRecord& record) {
  std::string out = std::to_string(record.timestamp) + ' ';
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, DoorOpened>) {
          out += "door_open";
        } else if constexpr (std::is_same_v<T, DoorClosed>) {
          out += "door_close";
        } else if constexpr (std::is_same_v<T, Reading>) {
          out += "reading " + std::to_string(body.position) + ' ' + format_double(body.value);
        } else {
          out += "recognized ";
          if (body.activity) out += "act=" + std::to_string(*body.activity) + ' ';
          out += body.name;
        }
      },
      record.body);
  return out;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  for (const auto& record : records) out << format_record(record) << '\n';
}

std::string format_trace(const std::vector<TraceRecord>& records) {
  std::ostringstream out;
  write_trace(out, records);
  return out.str();
}

}  // namespace coldbench::detection
