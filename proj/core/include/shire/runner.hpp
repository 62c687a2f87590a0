#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shire/metrics.hpp"
#include "shire/scenario.hpp"

namespace shire {

struct RunIssue {
  Protocol protocol = Protocol::Abps;
  std::uint64_t seed = 0;
  std::string message;
};

struct MatrixResult {
  std::vector<RunIssue> issues;
  int runs = 0;
  bool ok() const { return issues.empty(); }
};

// One run per (protocol, seed). Emits, under out_dir:
//   <proto>-seed<seed>.log   serialized event log
//   <proto>-seed<seed>.csv   downtime records
//   <proto>-summary.csv      per-handover-index mean and ci95
//   comparison.dat           gnuplot columns, one block per handover index
// Every run is checked against the offline downtime oracle; mismatches and
// I/O failures are reported as issues.
MatrixResult run_matrix(const ScenarioConfig& cfg,
                        const std::vector<Protocol>& protocols,
                        const std::vector<std::uint64_t>& seeds,
                        const std::string& out_dir);

// Reads the per-run CSVs back from a run_matrix output directory and
// renders the downtime comparison table.
std::string report(const std::string& in_dir);

}  // namespace shire
