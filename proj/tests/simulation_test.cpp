#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "shire/runner.hpp"
#include "shire/simulation.hpp"
#include "test_scenarios.hpp"

using namespace shire;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("shiresim-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("identical (scenario, protocol, seed) runs are byte-identical") {
  ScenarioConfig cfg = testing::two_ap_walk();
  for (Protocol p : {Protocol::Abps, Protocol::Mipv6, Protocol::Lisp}) {
    Simulation a(cfg, p, 5);
    Simulation b(cfg, p, 5);
    RunResult ra = a.run();
    RunResult rb = b.run();
    CHECK(ra.log.serialize() == rb.log.serialize());
    CHECK(downtime_csv(p, 5, ra.downtime) == downtime_csv(p, 5, rb.downtime));
  }
}

TEST_CASE("different seeds change the mipv6 trace but not the abps one") {
  ScenarioConfig cfg = testing::two_ap_walk();
  Simulation m1(cfg, Protocol::Mipv6, 1);
  Simulation m2(cfg, Protocol::Mipv6, 2);
  CHECK(m1.run().log.serialize() != m2.run().log.serialize());
  // the abps data path draws no randomness; seeds only matter through
  // protocol randomness
  Simulation a1(cfg, Protocol::Abps, 1);
  Simulation a2(cfg, Protocol::Abps, 2);
  CHECK(a1.run().log.serialize() == a2.run().log.serialize());
}

TEST_CASE("run_matrix writes the expected files once per (protocol, seed)") {
  ScenarioConfig cfg = testing::two_ap_walk();
  cfg.run.duration = 80;
  fs::path dir = fresh_dir("matrix");
  std::vector<Protocol> protocols{Protocol::Abps, Protocol::Lisp};
  std::vector<std::uint64_t> seeds{1, 2, 3};

  MatrixResult result = run_matrix(cfg, protocols, seeds, dir.string());
  CHECK(result.ok());
  CHECK(result.runs == 6);
  for (Protocol p : protocols)
    for (std::uint64_t s : seeds) {
      std::string base = std::string(to_string(p)) + "-seed" + std::to_string(s);
      CHECK(fs::exists(dir / (base + ".log")));
      CHECK(fs::exists(dir / (base + ".csv")));
    }
  CHECK(fs::exists(dir / "abps-summary.csv"));
  CHECK(fs::exists(dir / "lisp-summary.csv"));
  CHECK(fs::exists(dir / "comparison.dat"));

  // the summary aggregates ten... three seeds per row
  std::string summary = slurp(dir / "abps-summary.csv");
  CHECK(summary.find("abps,0,handover,3,") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("the run matrix output does not depend on execution order") {
  ScenarioConfig cfg = testing::two_ap_walk();
  cfg.run.duration = 80;
  fs::path d1 = fresh_dir("order-a");
  fs::path d2 = fresh_dir("order-b");
  run_matrix(cfg, {Protocol::Abps, Protocol::Mipv6}, {1, 2}, d1.string());
  run_matrix(cfg, {Protocol::Mipv6, Protocol::Abps}, {2, 1}, d2.string());
  for (const char* name :
       {"abps-seed1.log", "abps-seed2.log", "mipv6-seed1.log",
        "mipv6-seed2.log", "abps-seed1.csv", "mipv6-seed2.csv",
        "abps-summary.csv", "mipv6-summary.csv"})
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("run_matrix invoked twice produces byte-identical trees") {
  ScenarioConfig cfg = testing::walled_gap();
  fs::path d1 = fresh_dir("repeat-a");
  fs::path d2 = fresh_dir("repeat-b");
  run_matrix(cfg, {Protocol::Abps, Protocol::Lisp}, {4}, d1.string());
  run_matrix(cfg, {Protocol::Abps, Protocol::Lisp}, {4}, d2.string());
  for (const auto& entry : fs::directory_iterator(d1)) {
    fs::path other = d2 / entry.path().filename();
    CHECK(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("report renders one row per handover index") {
  ScenarioConfig cfg = testing::two_ap_walk();
  cfg.run.duration = 80;
  fs::path dir = fresh_dir("report");
  run_matrix(cfg, {Protocol::Abps, Protocol::Mipv6, Protocol::Lisp}, {1, 2},
             dir.string());
  std::string table = report(dir.string());
  CHECK(table.find("abps") != std::string::npos);
  CHECK(table.find("mipv6") != std::string::npos);
  CHECK(table.find("handover") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("forced NIC flapping: many retransmissions, exactly-once delivery") {
  ScenarioConfig cfg = testing::parked_dual_coverage(60);
  Simulation sim(cfg, Protocol::Abps, 1);
  // flap the NIC carrying data every 400 ms; in-flight frames lose their
  // acks, get retransmitted on the other interface, and arrive twice at the
  // proxy
  for (double t = 5.0; t < 55.0; t += 0.4) {
    int nic = static_cast<int>(t * 10) % 8 < 4 ? 0 : 1;
    sim.engine().schedule(sim_seconds(t), [&sim, nic](Engine&) {
      sim.link().link_down(nic);
    });
  }
  RunResult r = sim.run();

  CHECK(r.retransmissions >= 50);
  CHECK(r.dup_dropped > 0);  // the dedup window really worked
  const auto& deliveries = sim.correspondent().deliveries(Simulation::kFlow);
  CHECK(deliveries.size() > 1000);
  for (const auto& [seq, count] : deliveries) CHECK(count == 1);
}

TEST_CASE("the switchover bound holds for every handover in the walk") {
  ScenarioConfig cfg = testing::two_ap_walk();
  Simulation sim(cfg, Protocol::Abps, 1);
  RunResult r = sim.run();
  double bound = cfg.link.ack_timeout + cfg.abps.retry_interval +
                 2 * cfg.link.frame_tx_latency + cfg.link.wired_rtt_to_proxy / 2 +
                 cfg.abps.proxy_to_correspondent_latency;
  REQUIRE(!r.downtime.empty());
  for (const DowntimeRecord& rec : r.downtime)
    if (rec.cause == DowntimeCause::Handover)
      CHECK(rec.duration_seconds() <= bound);
}

TEST_CASE("downtime per protocol is ordered abps < lisp < mipv6") {
  ScenarioConfig cfg = testing::two_ap_walk();
  std::map<Protocol, double> duration;
  for (Protocol p : {Protocol::Abps, Protocol::Lisp, Protocol::Mipv6}) {
    Simulation sim(cfg, p, 1);
    RunResult r = sim.run();
    REQUIRE(r.downtime.size() == 1);
    duration[p] = r.downtime[0].duration_seconds();
  }
  CHECK(duration[Protocol::Abps] < duration[Protocol::Lisp]);
  CHECK(duration[Protocol::Lisp] < duration[Protocol::Mipv6]);
}

TEST_CASE("run issues surface when the output directory is unwritable") {
  ScenarioConfig cfg = testing::two_ap_walk();
  cfg.run.duration = 5;
  MatrixResult result =
      run_matrix(cfg, {Protocol::Abps}, {1}, "/proc/definitely/not/writable");
  CHECK_FALSE(result.ok());
}
