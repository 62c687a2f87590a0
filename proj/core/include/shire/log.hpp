#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shire/time.hpp"

namespace shire {

// One trace record. `detail` holds space-separated key=value pairs and is
// the last serialized field, so it may not contain newlines.
struct LogRecord {
  std::int64_t time_us = 0;
  std::string entity;
  std::string kind;
  std::string detail;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct LogParseError : std::runtime_error {
  LogParseError(int line_no, const std::string& msg);
  int line = 0;
};

// Append-only trace of one run, serialized as newline-delimited
//   time_us,entity,kind,detail
// records. The downtime oracle consumes exactly this format.
class EventLog {
 public:
  void append(std::int64_t time_us, std::string entity, std::string kind,
              std::string detail);

  const std::vector<LogRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  void serialize(std::ostream& out) const;
  std::string serialize() const;

  static EventLog parse(std::istream& in);
  static EventLog parse_string(const std::string& text);

  friend bool operator==(const EventLog&, const EventLog&) = default;

 private:
  std::vector<LogRecord> records_;
};

// Helpers for building and reading detail strings.
class Detail {
 public:
  Detail& add(std::string_view key, std::string_view value);
  Detail& add(std::string_view key, std::int64_t value);
  Detail& add(std::string_view key, std::uint64_t value);
  std::string str() const { return s_; }

 private:
  std::string s_;
};

std::optional<std::string_view> detail_field(std::string_view detail,
                                             std::string_view key);
std::optional<std::int64_t> detail_i64(std::string_view detail,
                                       std::string_view key);

}  // namespace shire
