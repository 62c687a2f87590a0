#include "shire/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace shire {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Abps: return "abps";
    case Protocol::Mipv6: return "mipv6";
    case Protocol::Lisp: return "lisp";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  if (name == "abps") return Protocol::Abps;
  if (name == "mipv6") return Protocol::Mipv6;
  if (name == "lisp") return Protocol::Lisp;
  return std::nullopt;
}

const char* to_string(DowntimeCause c) {
  return c == DowntimeCause::Handover ? "handover" : "coverage_gap";
}

namespace {

struct EmptyIntervals {
  std::vector<std::pair<std::int64_t, std::int64_t>> closed;
  bool open = false;
  std::int64_t open_since = 0;

  void on_coverage(std::int64_t t, bool empty) {
    if (empty && !open) {
      open = true;
      open_since = t;
    } else if (!empty && open) {
      closed.push_back({open_since, t});
      open = false;
    }
  }
  void finish(std::int64_t t_end) {
    if (open) {
      closed.push_back({open_since, t_end});
      open = false;
    }
  }
  bool overlaps(std::int64_t a, std::int64_t b) const {
    for (auto [lo, hi] : closed)
      if (lo < b && hi > a) return true;
    return false;
  }
};

bool coverage_is_empty(std::string_view detail) {
  auto aps = detail_field(detail, "aps");
  return !aps || aps->empty();
}

}  // namespace

std::vector<DowntimeRecord> downtime_online(const EventLog& log) {
  struct Open {
    std::int64_t start_us = 0;
    std::uint64_t failed_seq = 0;
  };
  std::map<FlowId, Open> open;
  std::map<FlowId, std::uint64_t> max_delivered;
  EmptyIntervals gaps;
  std::vector<DowntimeRecord> out;
  std::int64_t last_time = 0;

  for (const LogRecord& r : log.records()) {
    last_time = r.time_us;
    if (r.kind == "coverage") {
      gaps.on_coverage(r.time_us, coverage_is_empty(r.detail));
      continue;
    }
    if (r.kind == "timeout") {
      auto flow = detail_i64(r.detail, "flow");
      auto seq = detail_i64(r.detail, "seq");
      auto tx = detail_i64(r.detail, "tx");
      if (!flow || !seq || !tx) continue;
      FlowId f = static_cast<FlowId>(*flow);
      if (open.count(f)) continue;  // already in an episode, merge
      auto md = max_delivered.find(f);
      if (md != max_delivered.end() &&
          static_cast<std::uint64_t>(*seq) <= md->second)
        continue;  // stale attempt of an already-delivered datagram
      open[f] = {*tx, static_cast<std::uint64_t>(*seq)};
      continue;
    }
    if (r.kind == "deliver") {
      auto flow = detail_i64(r.detail, "flow");
      auto seq = detail_i64(r.detail, "seq");
      if (!flow || !seq) continue;
      FlowId f = static_cast<FlowId>(*flow);
      std::uint64_t s = static_cast<std::uint64_t>(*seq);
      auto& md = max_delivered[f];
      if (s > md) md = s;
      auto it = open.find(f);
      if (it != open.end() && s >= it->second.failed_seq) {
        DowntimeRecord rec;
        rec.flow_id = f;
        rec.start = SimTime::from_us(it->second.start_us);
        rec.end = SimTime::from_us(r.time_us);
        out.push_back(rec);
        open.erase(it);
      }
    }
  }

  gaps.finish(last_time);
  for (auto& [f, o] : open) {
    DowntimeRecord rec;
    rec.flow_id = f;
    rec.start = SimTime::from_us(o.start_us);
    rec.end = SimTime::from_us(last_time);
    rec.truncated = true;
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const DowntimeRecord& a, const DowntimeRecord& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.flow_id < b.flow_id;
            });
  for (DowntimeRecord& rec : out)
    rec.cause = gaps.overlaps(rec.start.us(), rec.end.us())
                    ? DowntimeCause::CoverageGap
                    : DowntimeCause::Handover;
  return out;
}

std::vector<DowntimeRecord> downtime_oracle(std::istream& in) {
  EventLog log = EventLog::parse(in);

  // gather the raw material per flow, then rebuild episodes from scratch
  struct FlowEvent {
    std::int64_t t;
    bool is_timeout;
    std::uint64_t seq;
    std::int64_t tx;  // timeouts only
  };
  std::map<FlowId, std::vector<FlowEvent>> per_flow;
  EmptyIntervals gaps;
  std::int64_t last_time = 0;

  int line_no = 0;
  for (const LogRecord& r : log.records()) {
    ++line_no;
    last_time = r.time_us;
    if (r.kind == "coverage") {
      gaps.on_coverage(r.time_us, coverage_is_empty(r.detail));
    } else if (r.kind == "timeout" || r.kind == "deliver") {
      auto flow = detail_i64(r.detail, "flow");
      auto seq = detail_i64(r.detail, "seq");
      if (!flow || !seq)
        throw LogParseError(line_no, "record lacks flow=/seq= fields");
      FlowEvent ev;
      ev.t = r.time_us;
      ev.is_timeout = r.kind == "timeout";
      ev.seq = static_cast<std::uint64_t>(*seq);
      ev.tx = 0;
      if (ev.is_timeout) {
        auto tx = detail_i64(r.detail, "tx");
        if (!tx) throw LogParseError(line_no, "timeout lacks tx= field");
        ev.tx = *tx;
      }
      per_flow[static_cast<FlowId>(*flow)].push_back(ev);
    }
  }
  gaps.finish(last_time);

  std::vector<DowntimeRecord> out;
  for (auto& [flow, events] : per_flow) {
    bool episode = false;
    std::int64_t start = 0;
    std::uint64_t failed_seq = 0;
    std::uint64_t max_delivered = 0;
    bool delivered_any = false;
    for (const FlowEvent& ev : events) {
      if (ev.is_timeout) {
        if (episode) continue;
        if (delivered_any && ev.seq <= max_delivered) continue;
        episode = true;
        start = ev.tx;
        failed_seq = ev.seq;
      } else {
        if (!delivered_any || ev.seq > max_delivered) {
          max_delivered = ev.seq;
          delivered_any = true;
        }
        if (episode && ev.seq >= failed_seq) {
          DowntimeRecord rec;
          rec.flow_id = flow;
          rec.start = SimTime::from_us(start);
          rec.end = SimTime::from_us(ev.t);
          out.push_back(rec);
          episode = false;
        }
      }
    }
    if (episode) {
      DowntimeRecord rec;
      rec.flow_id = flow;
      rec.start = SimTime::from_us(start);
      rec.end = SimTime::from_us(last_time);
      rec.truncated = true;
      out.push_back(rec);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const DowntimeRecord& a, const DowntimeRecord& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.flow_id < b.flow_id;
            });
  for (DowntimeRecord& rec : out)
    rec.cause = gaps.overlaps(rec.start.us(), rec.end.us())
                    ? DowntimeCause::CoverageGap
                    : DowntimeCause::Handover;
  return out;
}

std::vector<DowntimeRecord> downtime_oracle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open log file " + path);
  return downtime_oracle(in);
}

double student_t_975(int dof) {
  static const double table[31] = {
      0,      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262,
      2.228,  2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093,
      2.086,  2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045,
      2.042};
  if (dof < 1) return 0;
  if (dof <= 30) return table[dof];
  if (dof <= 40) return 2.021;
  if (dof <= 60) return 2.000;
  if (dof <= 120) return 1.980;
  return 1.960;
}

RunSummary aggregate(const std::vector<std::vector<DowntimeRecord>>& runs) {
  RunSummary summary;
  std::size_t max_len = 0;
  for (const auto& r : runs) max_len = std::max(max_len, r.size());
  for (std::size_t i = 0; i < max_len; ++i) {
    std::vector<double> xs;
    std::optional<DowntimeCause> cause;
    for (const auto& r : runs) {
      if (i >= r.size()) continue;
      xs.push_back(r[i].duration_seconds());
      if (!cause) cause = r[i].cause;
    }
    int n = static_cast<int>(xs.size());
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= n;
    double hw = 0;
    if (n >= 2) {
      double var = 0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var /= (n - 1);
      hw = student_t_975(n - 1) * std::sqrt(var / n);
    }
    summary.rows.push_back({static_cast<int>(i),
                            cause.value_or(DowntimeCause::Handover), n, mean,
                            hw});
  }
  return summary;
}

namespace {

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

std::string downtime_csv(Protocol p, std::uint64_t seed,
                         const std::vector<DowntimeRecord>& records) {
  std::ostringstream os;
  os << "protocol,run_seed,handover_index,cause,start_us,end_us,duration_s,"
        "truncated\n";
  int idx = 0;
  for (const DowntimeRecord& r : records) {
    os << to_string(p) << ',' << seed << ',' << idx++ << ','
       << to_string(r.cause) << ',' << r.start.us() << ',' << r.end.us() << ','
       << fmt_seconds(r.duration_seconds()) << ',' << (r.truncated ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string summary_csv(Protocol p, const RunSummary& summary) {
  std::ostringstream os;
  os << "protocol,handover_index,cause,samples,mean_s,ci95_s\n";
  for (const RunSummary::Row& row : summary.rows) {
    os << to_string(p) << ',' << row.handover_index << ','
       << to_string(row.cause) << ',' << row.samples << ','
       << fmt_seconds(row.mean_s) << ',' << fmt_seconds(row.ci95_half_width_s)
       << '\n';
  }
  return os.str();
}

ParsedRunCsv parse_downtime_csv(std::istream& in) {
  ParsedRunCsv out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;  // header
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      std::size_t c = line.find(',', pos);
      if (c == std::string::npos) {
        f.push_back(line.substr(pos));
        break;
      }
      f.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    if (f.size() != 8)
      throw LogParseError(line_no, "expected 8 CSV columns");
    auto proto = parse_protocol(f[0]);
    if (!proto) throw LogParseError(line_no, "unknown protocol " + f[0]);
    out.protocol = *proto;
    out.seed = std::stoull(f[1]);
    DowntimeRecord rec;
    rec.flow_id = 1;
    rec.cause = f[3] == "coverage_gap" ? DowntimeCause::CoverageGap
                                       : DowntimeCause::Handover;
    rec.start = SimTime::from_us(std::stoll(f[4]));
    rec.end = SimTime::from_us(std::stoll(f[5]));
    rec.truncated = f[7] == "1";
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace shire
