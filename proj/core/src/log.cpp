#include "shire/log.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace shire {

LogParseError::LogParseError(int line_no, const std::string& msg)
    : std::runtime_error("log parse error at line " + std::to_string(line_no) +
                         ": " + msg),
      line(line_no) {}

void EventLog::append(std::int64_t time_us, std::string entity,
                      std::string kind, std::string detail) {
  records_.push_back(
      {time_us, std::move(entity), std::move(kind), std::move(detail)});
}

void EventLog::serialize(std::ostream& out) const {
  out << serialize();
}

std::string EventLog::serialize() const {
  std::size_t bytes = 0;
  for (const LogRecord& r : records_)
    bytes += r.entity.size() + r.kind.size() + r.detail.size() + 24;
  std::string out;
  out.reserve(bytes);
  char buf[24];
  for (const LogRecord& r : records_) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.time_us);
    out.append(buf, ptr);
    out += ',';
    out += r.entity;
    out += ',';
    out += r.kind;
    out += ',';
    out += r.detail;
    out += '\n';
  }
  return out;
}

EventLog EventLog::parse(std::istream& in) {
  EventLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    if (c1 == std::string::npos) throw LogParseError(line_no, "missing entity field");
    std::size_t c2 = line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw LogParseError(line_no, "missing kind field");
    std::size_t c3 = line.find(',', c2 + 1);
    if (c3 == std::string::npos) throw LogParseError(line_no, "missing detail field");

    std::int64_t t = 0;
    const char* first = line.data();
    auto [ptr, ec] = std::from_chars(first, first + c1, t);
    if (ec != std::errc() || ptr != first + c1)
      throw LogParseError(line_no, "bad time_us value");

    log.append(t, line.substr(c1 + 1, c2 - c1 - 1),
               line.substr(c2 + 1, c3 - c2 - 1), line.substr(c3 + 1));
  }
  return log;
}

EventLog EventLog::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

Detail& Detail::add(std::string_view key, std::string_view value) {
  if (!s_.empty()) s_ += ' ';
  s_ += key;
  s_ += '=';
  s_ += value;
  return *this;
}

Detail& Detail::add(std::string_view key, std::int64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(value));
  return add(key, std::string_view(buf));
}

Detail& Detail::add(std::string_view key, std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(value));
  return add(key, std::string_view(buf));
}

std::optional<std::string_view> detail_field(std::string_view detail,
                                             std::string_view key) {
  std::size_t pos = 0;
  while (pos < detail.size()) {
    std::size_t end = detail.find(' ', pos);
    if (end == std::string_view::npos) end = detail.size();
    std::string_view tok = detail.substr(pos, end - pos);
    std::size_t eq = tok.find('=');
    if (eq != std::string_view::npos && tok.substr(0, eq) == key)
      return tok.substr(eq + 1);
    pos = end + 1;
  }
  return std::nullopt;
}

std::optional<std::int64_t> detail_i64(std::string_view detail,
                                       std::string_view key) {
  auto f = detail_field(detail, key);
  if (!f) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(f->data(), f->data() + f->size(), v);
  if (ec != std::errc() || ptr != f->data() + f->size()) return std::nullopt;
  return v;
}

}  // namespace shire
