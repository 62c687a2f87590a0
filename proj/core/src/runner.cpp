#include "shire/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "shire/simulation.hpp"

namespace fs = std::filesystem;

namespace shire {

namespace {

bool write_file(const std::string& path, const std::string& content,
                std::string* error) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    *error = "cannot open " + path + " for writing";
    return false;
  }
  out << content;
  out.flush();
  if (!out) {
    *error = "write failed for " + path;
    return false;
  }
  return true;
}

std::string run_basename(Protocol p, std::uint64_t seed) {
  return std::string(to_string(p)) + "-seed" + std::to_string(seed);
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string comparison_dat(const std::map<Protocol, RunSummary>& summaries) {
  std::vector<Protocol> order{Protocol::Abps, Protocol::Mipv6, Protocol::Lisp};
  std::vector<Protocol> present;
  std::size_t rows = 0;
  for (Protocol p : order) {
    auto it = summaries.find(p);
    if (it == summaries.end()) continue;
    present.push_back(p);
    rows = std::max(rows, it->second.rows.size());
  }
  std::ostringstream os;
  os << "# handover_index";
  for (Protocol p : present)
    os << ' ' << to_string(p) << "_mean_s " << to_string(p) << "_ci95_s";
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    os << i;
    for (Protocol p : present) {
      const RunSummary& s = summaries.at(p);
      if (i < s.rows.size())
        os << ' ' << fmt6(s.rows[i].mean_s) << ' '
           << fmt6(s.rows[i].ci95_half_width_s);
      else
        os << " nan nan";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

MatrixResult run_matrix(const ScenarioConfig& cfg,
                        const std::vector<Protocol>& protocols,
                        const std::vector<std::uint64_t>& seeds,
                        const std::string& out_dir) {
  MatrixResult result;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    result.issues.push_back(
        {Protocol::Abps, 0, "cannot create output directory " + out_dir});
    return result;
  }

  std::map<Protocol, RunSummary> summaries;
  for (Protocol p : protocols) {
    std::vector<std::vector<DowntimeRecord>> per_seed;
    for (std::uint64_t seed : seeds) {
      Simulation sim(cfg, p, seed);
      RunResult run = sim.run();
      ++result.runs;

      std::string serialized = run.log.serialize();
      // the offline oracle must agree with the online computation exactly
      std::istringstream is(serialized);
      auto oracle = downtime_oracle(is);
      if (oracle != run.downtime)
        result.issues.push_back(
            {p, seed, "downtime oracle mismatch against online records"});

      std::string err;
      std::string base = out_dir + "/" + run_basename(p, seed);
      if (!write_file(base + ".log", serialized, &err))
        result.issues.push_back({p, seed, err});
      if (!write_file(base + ".csv", downtime_csv(p, seed, run.downtime), &err))
        result.issues.push_back({p, seed, err});
      per_seed.push_back(std::move(run.downtime));
    }
    RunSummary summary = aggregate(per_seed);
    std::string err;
    if (!write_file(out_dir + "/" + to_string(p) + "-summary.csv",
                    summary_csv(p, summary), &err))
      result.issues.push_back({p, 0, err});
    summaries[p] = std::move(summary);
  }

  if (!summaries.empty()) {
    std::string err;
    if (!write_file(out_dir + "/comparison.dat", comparison_dat(summaries),
                    &err))
      result.issues.push_back({Protocol::Abps, 0, err});
  }
  return result;
}

std::string report(const std::string& in_dir) {
  std::map<Protocol, std::vector<std::vector<DowntimeRecord>>> per_proto;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    std::string name = entry.path().filename().string();
    if (name.find("-seed") != std::string::npos && name.ends_with(".csv"))
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  for (const std::string& f : files) {
    std::ifstream in(f);
    if (!in) continue;
    ParsedRunCsv parsed = parse_downtime_csv(in);
    per_proto[parsed.protocol].push_back(std::move(parsed.records));
  }
  if (per_proto.empty())
    return "no per-run CSV files found in " + in_dir + "\n";

  std::vector<Protocol> order{Protocol::Abps, Protocol::Lisp, Protocol::Mipv6};
  std::map<Protocol, RunSummary> summaries;
  std::size_t rows = 0;
  for (auto& [p, runs] : per_proto) {
    summaries[p] = aggregate(runs);
    rows = std::max(rows, summaries[p].rows.size());
  }

  std::ostringstream os;
  os << "downtime per handover index, mean seconds +-ci95 across runs\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-6s %-13s", "index", "cause");
  os << buf;
  for (Protocol p : order)
    if (summaries.count(p)) {
      std::snprintf(buf, sizeof buf, " %18s", to_string(p));
      os << buf;
    }
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    const char* cause = "-";
    for (Protocol p : order)
      if (summaries.count(p) && i < summaries[p].rows.size()) {
        cause = to_string(summaries[p].rows[i].cause);
        break;
      }
    std::snprintf(buf, sizeof buf, "%-6zu %-13s", i, cause);
    os << buf;
    for (Protocol p : order) {
      if (!summaries.count(p)) continue;
      const RunSummary& s = summaries[p];
      if (i < s.rows.size()) {
        std::string cell =
            fmt3(s.rows[i].mean_s) + " +-" + fmt3(s.rows[i].ci95_half_width_s);
        std::snprintf(buf, sizeof buf, " %18s", cell.c_str());
        os << buf;
      } else {
        std::snprintf(buf, sizeof buf, " %18s", "-");
        os << buf;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace shire
