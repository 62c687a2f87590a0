#include "shire/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace shire {

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  os << "line " << line << ": " << key << ": " << message;
  return os.str();
}

namespace {

struct KeyValue {
  int line;
  std::string key;
  std::string value;
  bool used = false;
};

struct Section {
  int line;
  std::string name;
  std::vector<KeyValue> entries;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  explicit Parser(const std::string& text) { split(text); }

  ParseResult run() {
    ScenarioConfig cfg;
    bool have_path = false, have_run = false;

    for (Section& sec : sections_) {
      if (sec.name == "scenario") {
        parse_scenario_section(sec, cfg);
      } else if (sec.name == "ap") {
        parse_ap(sec, cfg);
      } else if (sec.name == "obstacle") {
        parse_obstacle(sec, cfg);
      } else if (sec.name == "path") {
        have_path = true;
        parse_path(sec, cfg);
      } else if (sec.name == "link") {
        parse_link(sec, cfg);
      } else if (sec.name == "traffic") {
        parse_traffic(sec, cfg);
      } else if (sec.name == "run") {
        have_run = true;
        parse_run(sec, cfg);
      } else if (sec.name == "abps") {
        parse_abps(sec, cfg);
      } else if (sec.name == "mipv6") {
        parse_mipv6(sec, cfg);
      } else if (sec.name == "lisp") {
        parse_lisp(sec, cfg);
      } else if (sec.name == "adhoc") {
        parse_adhoc(sec, cfg);
      } else {
        error(sec.line, sec.name, "unknown section");
      }
    }

    if (cfg.aps.empty()) error(0, "ap", "scenario declares no access point");
    if (!have_path) error(0, "path", "missing section");
    if (!have_run) error(0, "run", "missing section");
    validate(cfg);

    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty()) result.config = std::move(cfg);
    return result;
  }

 private:
  void split(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    Section* cur = nullptr;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(line_no, line, "malformed section header");
          cur = nullptr;
          continue;
        }
        sections_.push_back({line_no, trim(line.substr(1, line.size() - 2)), {}});
        cur = &sections_.back();
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        error(line_no, line, "expected key = value");
        continue;
      }
      if (!cur) {
        error(line_no, line, "key outside any section");
        continue;
      }
      cur->entries.push_back(
          {line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
  }

  void error(int line, const std::string& key, const std::string& msg) {
    diags_.push_back({line, key, msg});
  }

  KeyValue* find(Section& sec, const std::string& key) {
    for (KeyValue& kv : sec.entries)
      if (kv.key == key) {
        kv.used = true;
        return &kv;
      }
    return nullptr;
  }

  void reject_unknown(Section& sec) {
    for (const KeyValue& kv : sec.entries)
      if (!kv.used)
        error(kv.line, sec.name + "." + kv.key, "unknown key");
  }

  bool to_double(const KeyValue& kv, const std::string& ctx, double& out) {
    try {
      std::size_t used = 0;
      out = std::stod(kv.value, &used);
      if (used != kv.value.size()) throw std::invalid_argument("trailing");
      return true;
    } catch (...) {
      error(kv.line, ctx, "expected a number, got '" + kv.value + "'");
      return false;
    }
  }

  bool to_u64(const KeyValue& kv, const std::string& ctx, std::uint64_t& out) {
    auto [p, ec] =
        std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), out);
    if (ec != std::errc() || p != kv.value.data() + kv.value.size()) {
      error(kv.line, ctx, "expected an unsigned integer, got '" + kv.value + "'");
      return false;
    }
    return true;
  }

  bool to_int(const KeyValue& kv, const std::string& ctx, int& out) {
    auto [p, ec] =
        std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), out);
    if (ec != std::errc() || p != kv.value.data() + kv.value.size()) {
      error(kv.line, ctx, "expected an integer, got '" + kv.value + "'");
      return false;
    }
    return true;
  }

  bool to_bool(const KeyValue& kv, const std::string& ctx, bool& out) {
    if (kv.value == "true") {
      out = true;
      return true;
    }
    if (kv.value == "false") {
      out = false;
      return true;
    }
    error(kv.line, ctx, "expected true or false, got '" + kv.value + "'");
    return false;
  }

  bool to_points(const KeyValue& kv, const std::string& ctx,
                 std::vector<Point2D>& out) {
    std::istringstream is(kv.value);
    std::string tok;
    out.clear();
    while (is >> tok) {
      double x = 0, y = 0;
      if (std::sscanf(tok.c_str(), "(%lf,%lf)", &x, &y) != 2) {
        error(kv.line, ctx, "expected (x,y) point, got '" + tok + "'");
        return false;
      }
      out.push_back({x, y});
    }
    if (out.empty()) {
      error(kv.line, ctx, "empty point list");
      return false;
    }
    return true;
  }

  void opt_double(Section& sec, const std::string& key, double& out) {
    if (KeyValue* kv = find(sec, key))
      to_double(*kv, sec.name + "." + key, out);
  }
  void opt_int(Section& sec, const std::string& key, int& out) {
    if (KeyValue* kv = find(sec, key)) to_int(*kv, sec.name + "." + key, out);
  }
  void opt_bool(Section& sec, const std::string& key, bool& out) {
    if (KeyValue* kv = find(sec, key)) to_bool(*kv, sec.name + "." + key, out);
  }

  void parse_scenario_section(Section& sec, ScenarioConfig& cfg) {
    if (KeyValue* kv = find(sec, "name")) cfg.name = kv->value;
    reject_unknown(sec);
  }

  void parse_ap(Section& sec, ScenarioConfig& cfg) {
    AccessPoint ap;
    if (KeyValue* kv = find(sec, "id"))
      ap.id = kv->value;
    else
      error(sec.line, "ap.id", "missing key");
    if (KeyValue* kv = find(sec, "x")) to_double(*kv, "ap.x", ap.position.x);
    if (KeyValue* kv = find(sec, "y")) to_double(*kv, "ap.y", ap.position.y);
    if (KeyValue* kv = find(sec, "range")) {
      if (to_double(*kv, "ap.range", ap.range) && ap.range <= 0)
        error(kv->line, "ap.range", "range must be > 0");
    } else {
      error(sec.line, "ap.range", "missing key");
    }
    if (KeyValue* kv = find(sec, "wlan"))
      ap.wlan_id = kv->value;
    else
      error(sec.line, "ap.wlan", "missing key");
    if (KeyValue* kv = find(sec, "wired_latency")) {
      if (to_double(*kv, "ap.wired_latency", ap.wired_latency_to_internet) &&
          ap.wired_latency_to_internet < 0)
        error(kv->line, "ap.wired_latency", "latency must be >= 0");
    }
    reject_unknown(sec);
    cfg.aps.push_back(std::move(ap));
  }

  void parse_obstacle(Section& sec, ScenarioConfig& cfg) {
    Obstacle ob;
    if (KeyValue* kv = find(sec, "vertices")) {
      if (to_points(*kv, "obstacle.vertices", ob.vertices)) {
        if (ob.vertices.size() < 3)
          error(kv->line, "obstacle.vertices", "polygon needs >= 3 vertices");
        else if (!polygon_is_simple(ob))
          error(kv->line, "obstacle.vertices", "polygon self-intersects");
        else if (polygon_area(ob) <= 0)
          error(kv->line, "obstacle.vertices", "polygon has zero area");
      }
    } else {
      error(sec.line, "obstacle.vertices", "missing key");
    }
    reject_unknown(sec);
    cfg.obstacles.push_back(std::move(ob));
  }

  void parse_path(Section& sec, ScenarioConfig& cfg) {
    if (KeyValue* kv = find(sec, "waypoints")) {
      if (to_points(*kv, "path.waypoints", cfg.path.waypoints) &&
          cfg.path.waypoints.size() < 2)
        error(kv->line, "path.waypoints", "path needs >= 2 waypoints");
    } else {
      error(sec.line, "path.waypoints", "missing key");
    }
    if (KeyValue* kv = find(sec, "speed")) {
      if (to_double(*kv, "path.speed", cfg.path.speed) && cfg.path.speed <= 0)
        error(kv->line, "path.speed", "speed must be > 0");
    }
    if (KeyValue* kv = find(sec, "segment_speeds")) {
      std::istringstream is(kv->value);
      double v;
      cfg.path.segment_speeds.clear();
      while (is >> v) {
        if (v <= 0) {
          error(kv->line, "path.segment_speeds", "speeds must be > 0");
          break;
        }
        cfg.path.segment_speeds.push_back(v);
      }
      if (!cfg.path.waypoints.empty() &&
          cfg.path.segment_speeds.size() != cfg.path.waypoints.size() - 1)
        error(kv->line, "path.segment_speeds",
              "expected one speed per path segment");
    }
    reject_unknown(sec);
  }

  void parse_link(Section& sec, ScenarioConfig& cfg) {
    opt_double(sec, "frame_tx_latency", cfg.link.frame_tx_latency);
    opt_double(sec, "ack_timeout", cfg.link.ack_timeout);
    opt_double(sec, "association_delay", cfg.link.association_delay);
    opt_double(sec, "address_config_delay", cfg.link.address_config_delay);
    opt_double(sec, "wired_rtt_to_proxy", cfg.link.wired_rtt_to_proxy);
    opt_double(sec, "scan_interval", cfg.link.scan_interval);
    reject_unknown(sec);
    link_line_ = sec.line;
  }

  void parse_traffic(Section& sec, ScenarioConfig& cfg) {
    opt_double(sec, "interval", cfg.traffic.interval);
    if (KeyValue* kv = find(sec, "payload_len")) {
      int v = 0;
      if (to_int(*kv, "traffic.payload_len", v)) {
        if (v <= 0)
          error(kv->line, "traffic.payload_len", "payload_len must be > 0");
        else
          cfg.traffic.payload_len = static_cast<std::uint32_t>(v);
      }
    }
    if (cfg.traffic.interval <= 0)
      error(sec.line, "traffic.interval", "interval must be > 0");
    reject_unknown(sec);
  }

  void parse_run(Section& sec, ScenarioConfig& cfg) {
    if (KeyValue* kv = find(sec, "duration")) {
      if (to_double(*kv, "run.duration", cfg.run.duration) &&
          cfg.run.duration <= 0)
        error(kv->line, "run.duration", "duration must be > 0");
    } else {
      error(sec.line, "run.duration", "missing key");
    }
    if (KeyValue* kv = find(sec, "seeds")) {
      std::istringstream is(kv->value);
      std::string tok;
      cfg.run.seeds.clear();
      while (is >> tok) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) {
          error(kv->line, "run.seeds", "bad seed '" + tok + "'");
          break;
        }
        cfg.run.seeds.push_back(v);
      }
      if (cfg.run.seeds.empty())
        error(kv->line, "run.seeds", "at least one seed required");
    } else {
      error(sec.line, "run.seeds", "missing key");
    }
    if (KeyValue* kv = find(sec, "dt")) {
      if (to_double(*kv, "run.dt", cfg.run.dt) && cfg.run.dt <= 0)
        error(kv->line, "run.dt", "dt must be > 0");
    }
    if (KeyValue* kv = find(sec, "protocols")) {
      std::istringstream is(kv->value);
      std::string tok;
      cfg.run.protocols.clear();
      while (is >> tok) {
        auto p = parse_protocol(tok);
        if (!p) {
          error(kv->line, "run.protocols", "unknown protocol '" + tok + "'");
          break;
        }
        cfg.run.protocols.push_back(*p);
      }
    } else {
      cfg.run.protocols = {Protocol::Abps, Protocol::Mipv6, Protocol::Lisp};
    }
    reject_unknown(sec);
  }

  void parse_abps(Section& sec, ScenarioConfig& cfg) {
    opt_double(sec, "retry_interval", cfg.abps.retry_interval);
    opt_double(sec, "keepalive_interval", cfg.abps.keepalive_interval);
    opt_int(sec, "failure_threshold", cfg.abps.failure_threshold);
    opt_int(sec, "seq_window", cfg.abps.seq_window);
    opt_double(sec, "proxy_latency", cfg.abps.proxy_to_correspondent_latency);
    if (KeyValue* kv = find(sec, "auth_key"))
      to_u64(*kv, "abps.auth_key", cfg.abps.auth_key);
    if (cfg.abps.failure_threshold < 1)
      error(sec.line, "abps.failure_threshold", "must be >= 1");
    if (cfg.abps.seq_window < 1)
      error(sec.line, "abps.seq_window", "must be >= 1");
    reject_unknown(sec);
  }

  void parse_mipv6(Section& sec, ScenarioConfig& cfg) {
    opt_double(sec, "router_adv_interval", cfg.mipv6.router_adv_interval);
    opt_double(sec, "dad_delay", cfg.mipv6.dad_delay);
    opt_double(sec, "binding_update_rtt", cfg.mipv6.binding_update_rtt);
    opt_double(sec, "return_routability_rtt", cfg.mipv6.return_routability_rtt);
    opt_double(sec, "home_agent_detour_latency",
               cfg.mipv6.home_agent_detour_latency);
    opt_double(sec, "retry_interval", cfg.mipv6.retry_interval);
    opt_int(sec, "failure_threshold", cfg.mipv6.failure_threshold);
    for (double v : {cfg.mipv6.router_adv_interval, cfg.mipv6.dad_delay,
                     cfg.mipv6.binding_update_rtt,
                     cfg.mipv6.return_routability_rtt,
                     cfg.mipv6.home_agent_detour_latency})
      if (v < 0) {
        error(sec.line, "mipv6", "delays must be >= 0");
        break;
      }
    reject_unknown(sec);
  }

  void parse_lisp(Section& sec, ScenarioConfig& cfg) {
    opt_double(sec, "map_request_rtt", cfg.lisp.map_request_rtt);
    opt_double(sec, "map_cache_update_delay", cfg.lisp.map_cache_update_delay);
    opt_double(sec, "encap_latency", cfg.lisp.encap_latency);
    opt_double(sec, "non_lisp_config_delay", cfg.lisp.non_lisp_config_delay);
    opt_bool(sec, "correspondent_lisp_enabled",
             cfg.lisp.correspondent_lisp_enabled);
    opt_double(sec, "retry_interval", cfg.lisp.retry_interval);
    opt_int(sec, "failure_threshold", cfg.lisp.failure_threshold);
    for (double v : {cfg.lisp.map_request_rtt, cfg.lisp.map_cache_update_delay,
                     cfg.lisp.encap_latency, cfg.lisp.non_lisp_config_delay})
      if (v < 0) {
        error(sec.line, "lisp", "delays must be >= 0");
        break;
      }
    reject_unknown(sec);
  }

  void parse_adhoc(Section& sec, ScenarioConfig& cfg) {
    AdhocConfig ad;
    opt_double(sec, "radio_range", ad.radio_range);
    opt_double(sec, "t_max", ad.t_max);
    opt_double(sec, "frame_latency", ad.frame_latency);
    if (KeyValue* kv = find(sec, "nodes"))
      to_points(*kv, "adhoc.nodes", ad.nodes);
    if (ad.radio_range <= 0)
      error(sec.line, "adhoc.radio_range", "must be > 0");
    if (ad.t_max <= 0) error(sec.line, "adhoc.t_max", "must be > 0");
    reject_unknown(sec);
    cfg.adhoc = std::move(ad);
  }

  void validate(ScenarioConfig& cfg) {
    std::set<std::string> ids, wlans;
    for (const AccessPoint& ap : cfg.aps) {
      if (!ids.insert(ap.id).second)
        error(0, "ap.id", "duplicate access point id " + ap.id);
      if (!wlans.insert(ap.wlan_id).second)
        error(0, "ap.wlan", "wlan " + ap.wlan_id +
                                " assigned to more than one access point");
    }
    if (cfg.link.frame_tx_latency < 0 || cfg.link.ack_timeout < 0 ||
        cfg.link.association_delay < 0 || cfg.link.address_config_delay < 0 ||
        cfg.link.wired_rtt_to_proxy < 0 || cfg.link.scan_interval <= 0)
      error(link_line_, "link", "latencies must be >= 0, scan_interval > 0");
    if (cfg.link.ack_timeout <= cfg.link.frame_tx_latency)
      error(link_line_, "link.ack_timeout",
            "ack_timeout must exceed frame_tx_latency");
  }

  std::vector<Section> sections_;
  std::vector<Diagnostic> diags_;
  int link_line_ = 0;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // trim to the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    if (std::stod(probe) == v) return probe;
  }
  return buf;
}

std::string fmt_points(const std::vector<Point2D>& pts) {
  std::string out;
  for (const Point2D& p : pts) {
    if (!out.empty()) out += ' ';
    out += "(" + fmt_double(p.x) + "," + fmt_double(p.y) + ")";
  }
  return out;
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  return Parser(text).run();
}

ParseResult parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({0, path, "cannot open scenario file"});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string print_scenario(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[scenario]\nname = " << cfg.name << "\n";
  for (const AccessPoint& ap : cfg.aps) {
    os << "\n[ap]\n";
    os << "id = " << ap.id << "\n";
    os << "x = " << fmt_double(ap.position.x) << "\n";
    os << "y = " << fmt_double(ap.position.y) << "\n";
    os << "range = " << fmt_double(ap.range) << "\n";
    os << "wlan = " << ap.wlan_id << "\n";
    os << "wired_latency = " << fmt_double(ap.wired_latency_to_internet) << "\n";
  }
  for (const Obstacle& ob : cfg.obstacles) {
    os << "\n[obstacle]\nvertices = " << fmt_points(ob.vertices) << "\n";
  }
  os << "\n[path]\n";
  os << "waypoints = " << fmt_points(cfg.path.waypoints) << "\n";
  os << "speed = " << fmt_double(cfg.path.speed) << "\n";
  if (!cfg.path.segment_speeds.empty()) {
    os << "segment_speeds =";
    for (double v : cfg.path.segment_speeds) os << ' ' << fmt_double(v);
    os << "\n";
  }
  os << "\n[link]\n";
  os << "frame_tx_latency = " << fmt_double(cfg.link.frame_tx_latency) << "\n";
  os << "ack_timeout = " << fmt_double(cfg.link.ack_timeout) << "\n";
  os << "association_delay = " << fmt_double(cfg.link.association_delay) << "\n";
  os << "address_config_delay = " << fmt_double(cfg.link.address_config_delay)
     << "\n";
  os << "wired_rtt_to_proxy = " << fmt_double(cfg.link.wired_rtt_to_proxy)
     << "\n";
  os << "scan_interval = " << fmt_double(cfg.link.scan_interval) << "\n";
  os << "\n[traffic]\n";
  os << "interval = " << fmt_double(cfg.traffic.interval) << "\n";
  os << "payload_len = " << cfg.traffic.payload_len << "\n";
  os << "\n[run]\n";
  os << "duration = " << fmt_double(cfg.run.duration) << "\n";
  os << "seeds =";
  for (std::uint64_t s : cfg.run.seeds) os << ' ' << s;
  os << "\n";
  os << "dt = " << fmt_double(cfg.run.dt) << "\n";
  os << "protocols =";
  for (Protocol p : cfg.run.protocols) os << ' ' << to_string(p);
  os << "\n";
  os << "\n[abps]\n";
  os << "retry_interval = " << fmt_double(cfg.abps.retry_interval) << "\n";
  os << "keepalive_interval = " << fmt_double(cfg.abps.keepalive_interval)
     << "\n";
  os << "failure_threshold = " << cfg.abps.failure_threshold << "\n";
  os << "seq_window = " << cfg.abps.seq_window << "\n";
  os << "proxy_latency = "
     << fmt_double(cfg.abps.proxy_to_correspondent_latency) << "\n";
  os << "auth_key = " << cfg.abps.auth_key << "\n";
  os << "\n[mipv6]\n";
  os << "router_adv_interval = " << fmt_double(cfg.mipv6.router_adv_interval)
     << "\n";
  os << "dad_delay = " << fmt_double(cfg.mipv6.dad_delay) << "\n";
  os << "binding_update_rtt = " << fmt_double(cfg.mipv6.binding_update_rtt)
     << "\n";
  os << "return_routability_rtt = "
     << fmt_double(cfg.mipv6.return_routability_rtt) << "\n";
  os << "home_agent_detour_latency = "
     << fmt_double(cfg.mipv6.home_agent_detour_latency) << "\n";
  os << "retry_interval = " << fmt_double(cfg.mipv6.retry_interval) << "\n";
  os << "failure_threshold = " << cfg.mipv6.failure_threshold << "\n";
  os << "\n[lisp]\n";
  os << "map_request_rtt = " << fmt_double(cfg.lisp.map_request_rtt) << "\n";
  os << "map_cache_update_delay = "
     << fmt_double(cfg.lisp.map_cache_update_delay) << "\n";
  os << "encap_latency = " << fmt_double(cfg.lisp.encap_latency) << "\n";
  os << "non_lisp_config_delay = "
     << fmt_double(cfg.lisp.non_lisp_config_delay) << "\n";
  os << "correspondent_lisp_enabled = "
     << (cfg.lisp.correspondent_lisp_enabled ? "true" : "false") << "\n";
  os << "retry_interval = " << fmt_double(cfg.lisp.retry_interval) << "\n";
  os << "failure_threshold = " << cfg.lisp.failure_threshold << "\n";
  if (cfg.adhoc) {
    os << "\n[adhoc]\n";
    os << "radio_range = " << fmt_double(cfg.adhoc->radio_range) << "\n";
    os << "t_max = " << fmt_double(cfg.adhoc->t_max) << "\n";
    os << "frame_latency = " << fmt_double(cfg.adhoc->frame_latency) << "\n";
    os << "nodes = " << fmt_points(cfg.adhoc->nodes) << "\n";
  }
  return os.str();
}

}  // namespace shire
