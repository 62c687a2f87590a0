// shiresim: scenario-driven comparison of multihoming handover strategies
// (ABPS proxy pair vs simplified MIPv6 and LISP) on a deterministic
// discrete-event simulator.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shire/metrics.hpp"
#include "shire/runner.hpp"
#include "shire/scenario.hpp"

namespace {

int print_diagnostics(const shire::ParseResult& parsed) {
  for (const shire::Diagnostic& d : parsed.diagnostics)
    std::cerr << "error: " << d.to_string() << "\n";
  return 1;
}

std::vector<std::uint64_t> expand_seeds(const std::string& arg) {
  std::vector<std::uint64_t> seeds;
  if (arg.find(',') == std::string::npos) {
    // a bare integer is a count: seeds 1..N
    std::uint64_t n = std::stoull(arg);
    for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    std::size_t c = arg.find(',', pos);
    std::string tok = arg.substr(pos, c == std::string::npos ? c : c - pos);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return seeds;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("SHIRESIM_OUT")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multihoming handover simulator"};
  app.require_subcommand(1);

  std::string scenario_path, protocol_arg = "all", seeds_arg, out_dir;
  std::string log_path, in_dir;

  CLI::App* run = app.add_subcommand("run", "execute the run matrix");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--protocol", protocol_arg, "abps|mipv6|lisp|all");
  run->add_option("--seeds", seeds_arg,
                  "comma-separated seed list, or a count for seeds 1..N");
  run->add_option("--out", out_dir, "output directory (default $SHIRESIM_OUT or ./out)");

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();

  CLI::App* oracle = app.add_subcommand(
      "oracle", "recompute downtime records from a serialized event log");
  oracle->add_option("--log", log_path, "event log file")->required();

  CLI::App* report =
      app.add_subcommand("report", "downtime comparison table from run CSVs");
  report->add_option("--in", in_dir, "run_matrix output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      shire::ParseResult parsed = shire::parse_scenario_file(scenario_path);
      if (!parsed.ok()) return print_diagnostics(parsed);
      std::cout << "ok: " << parsed.config->aps.size() << " aps, "
                << parsed.config->obstacles.size() << " obstacles, "
                << parsed.config->run.seeds.size() << " seeds\n";
      return 0;
    }

    if (run->parsed()) {
      shire::ParseResult parsed = shire::parse_scenario_file(scenario_path);
      if (!parsed.ok()) return print_diagnostics(parsed);
      const shire::ScenarioConfig& cfg = *parsed.config;

      std::vector<shire::Protocol> protocols;
      if (protocol_arg == "all") {
        protocols = cfg.run.protocols;
      } else if (auto p = shire::parse_protocol(protocol_arg)) {
        protocols = {*p};
      } else {
        std::cerr << "error: unknown protocol '" << protocol_arg << "'\n";
        return 1;
      }
      if (protocols.empty()) {
        std::cerr << "warning: empty protocol list, nothing to run\n";
        return 0;
      }
      std::vector<std::uint64_t> seeds =
          seeds_arg.empty() ? cfg.run.seeds : expand_seeds(seeds_arg);
      if (seeds.empty()) {
        std::cerr << "error: no seeds given\n";
        return 1;
      }
      if (out_dir.empty()) out_dir = default_out_dir();

      shire::MatrixResult result =
          shire::run_matrix(cfg, protocols, seeds, out_dir);
      std::cout << result.runs << " runs written to " << out_dir << "\n";
      for (const shire::RunIssue& issue : result.issues)
        std::cerr << "issue: " << shire::to_string(issue.protocol) << " seed "
                  << issue.seed << ": " << issue.message << "\n";
      return result.ok() ? 0 : 2;
    }

    if (oracle->parsed()) {
      auto records = shire::downtime_oracle_file(log_path);
      // recover protocol/seed from the run's meta record for the CSV header
      std::ifstream in(log_path);
      shire::EventLog log = shire::EventLog::parse(in);
      shire::Protocol proto = shire::Protocol::Abps;
      std::uint64_t seed = 0;
      for (const shire::LogRecord& r : log.records()) {
        if (r.kind != "meta") continue;
        if (auto p = shire::detail_field(r.detail, "proto"))
          if (auto parsed_p = shire::parse_protocol(*p)) proto = *parsed_p;
        if (auto s = shire::detail_i64(r.detail, "seed"))
          seed = static_cast<std::uint64_t>(*s);
        break;
      }
      std::cout << shire::downtime_csv(proto, seed, records);
      return 0;
    }

    if (report->parsed()) {
      std::cout << shire::report(in_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
