#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shire/datagram.hpp"
#include "shire/log.hpp"
#include "shire/time.hpp"

namespace shire {

enum class Protocol { Abps, Mipv6, Lisp };
const char* to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

enum class DowntimeCause { Handover, CoverageGap };
const char* to_string(DowntimeCause c);

// One service-unavailability interval: from the transmit instant of the
// first datagram whose transmission failed to the correspondent-side
// delivery of that datagram or a successor. Overlapping failures merge.
struct DowntimeRecord {
  FlowId flow_id = 0;
  SimTime start;  // tx time of the first failed transmission
  SimTime end;    // correspondent delivery closing the episode
  DowntimeCause cause = DowntimeCause::Handover;
  bool truncated = false;  // trace ended while the episode was open

  double duration_seconds() const { return (end - start).seconds(); }
  friend bool operator==(const DowntimeRecord&, const DowntimeRecord&) = default;
};

// Incremental scan over the in-memory trace.
std::vector<DowntimeRecord> downtime_online(const EventLog& log);

// Independent recomputation from the serialized format; must equal
// downtime_online exactly on every run. Throws LogParseError (with line
// number) on malformed input.
std::vector<DowntimeRecord> downtime_oracle(std::istream& serialized_log);
std::vector<DowntimeRecord> downtime_oracle_file(const std::string& path);

// Per-handover-index aggregation across independent runs.
struct RunSummary {
  struct Row {
    int handover_index = 0;
    DowntimeCause cause = DowntimeCause::Handover;
    int samples = 0;
    double mean_s = 0;
    double ci95_half_width_s = 0;  // Student-t, 0 when samples < 2
  };
  std::vector<Row> rows;
};

RunSummary aggregate(const std::vector<std::vector<DowntimeRecord>>& runs);

// 0.975 Student-t quantile (97.5%, two-sided 95%).
double student_t_975(int dof);

// CSV surfaces.
std::string downtime_csv(Protocol p, std::uint64_t seed,
                         const std::vector<DowntimeRecord>& records);
std::string summary_csv(Protocol p, const RunSummary& summary);

struct ParsedRunCsv {
  Protocol protocol = Protocol::Abps;
  std::uint64_t seed = 0;
  std::vector<DowntimeRecord> records;
};
ParsedRunCsv parse_downtime_csv(std::istream& in);

}  // namespace shire
