#include "cas/event_log.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace cas {

namespace {

bool clean_token(std::string_view s) {
  return s.find_first_of("|;=\r\n") == std::string_view::npos;
}

}  // namespace

std::string serialize_record(const TraceEvent& ev) {
  if (!std::isfinite(ev.t) || ev.t < 0.0)
    throw std::invalid_argument("record time must be finite and non-negative");
  std::string line = fmt_time(ev.t);
  line += '|';
  line += to_string(ev.kind);
  line += '|';
  bool first = true;
  for (const auto& [key, value] : ev.payload) {  // std::map: ascending keys
    if (key.empty() || !clean_token(key) || !clean_token(value))
      throw std::invalid_argument("payload entry '" + key + "' contains a reserved character");
    if (!first) line += ';';
    first = false;
    line += key;
    line += '=';
    line += value;
  }
  return line;
}

TraceEvent parse_record(std::string_view line, std::size_t line_no) {
  const auto bar1 = line.find('|');
  if (bar1 == std::string_view::npos) throw RecordParseError(line_no, "missing '|' after time");
  const auto bar2 = line.find('|', bar1 + 1);
  if (bar2 == std::string_view::npos) throw RecordParseError(line_no, "missing '|' after kind");

  TraceEvent ev;
  const std::string t_text(line.substr(0, bar1));
  const auto dot = t_text.find('.');
  if (t_text.empty() || dot == std::string::npos || t_text.size() - dot - 1 != 3)
    throw RecordParseError(line_no, "time must carry exactly three decimals: '" + t_text + "'");
  char* end = nullptr;
  errno = 0;
  ev.t = std::strtod(t_text.c_str(), &end);
  if (errno != 0 || end != t_text.c_str() + t_text.size() || !std::isfinite(ev.t) || ev.t < 0.0)
    throw RecordParseError(line_no, "bad time '" + t_text + "'");

  const auto kind_text = line.substr(bar1 + 1, bar2 - bar1 - 1);
  const auto kind = parse_event_kind(kind_text);
  if (!kind) throw RecordParseError(line_no, "unknown event kind '" + std::string(kind_text) + "'");
  ev.kind = *kind;

  std::string_view rest = line.substr(bar2 + 1);
  if (rest.find('|') != std::string_view::npos) throw RecordParseError(line_no, "extra '|'");
  std::string prev_key;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = rest.substr(0, semi);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw RecordParseError(line_no, "payload entry without key: '" + std::string(item) + "'");
    std::string key(item.substr(0, eq));
    std::string value(item.substr(eq + 1));
    if (value.find('=') != std::string::npos)
      throw RecordParseError(line_no, "payload value contains '='");
    if (!prev_key.empty() && key <= prev_key)
      throw RecordParseError(line_no, "payload keys not in ascending order");
    prev_key = key;
    ev.payload.emplace(std::move(key), std::move(value));
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
    if (rest.empty()) throw RecordParseError(line_no, "trailing ';'");
  }
  return ev;
}

std::vector<TraceEvent> read_records(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    out.push_back(parse_record(line, n));
  }
  return out;
}

void write_records(std::ostream& out, const std::vector<TraceEvent>& events) {
  for (const auto& ev : events) out << serialize_record(ev) << '\n';
}

}  // namespace cas
