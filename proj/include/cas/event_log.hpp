#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cas/core_types.hpp"

namespace cas {

/// Record grammar shared by `.trace` and `.gclog` files:
///
///   <t, three decimals>|<EventKind>|<k=v;k=v...>\n
///
/// Keys are emitted in ascending lexicographic order. Keys and values may not
/// contain '|', ';', '=' or line breaks.
std::string serialize_record(const TraceEvent& ev);

class RecordParseError : public std::runtime_error {
 public:
  RecordParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses a single record (without the trailing newline).
TraceEvent parse_record(std::string_view line, std::size_t line_no = 1);

std::vector<TraceEvent> read_records(std::istream& in);
void write_records(std::ostream& out, const std::vector<TraceEvent>& events);

/// Append-only event collector threaded through the pipeline stages.
class TraceBus {
 public:
  void emit(TraceEvent ev) { events_.push_back(std::move(ev)); }
  void emit(double t, EventKind kind, Payload payload = {}) {
    events_.push_back({t, kind, std::move(payload)});
  }
  const std::vector<TraceEvent>& events() const { return events_; }
  std::vector<TraceEvent> take() { return std::move(events_); }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<TraceEvent> events_;
};

inline void emit_to(TraceBus* bus, double t, EventKind kind, Payload payload = {}) {
  if (bus) bus->emit(t, kind, std::move(payload));
}

}  // namespace cas
