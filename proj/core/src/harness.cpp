#include "esdmesh/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace esdmesh {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  text = trim(text);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(std::string(key), "cannot parse `" + std::string(text) + "`");
  }
  return value;
}

template <typename T>
T parse_positive(std::string_view key, std::string_view text) {
  const T v = parse_number<T>(key, text);
  if (!(v > T{0})) throw ValidationError(std::string(key), "must be positive");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ValidationError(std::string(key), "must be finite");
  }
  return v;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"rows", [](auto& c, auto k, auto v) { c.rows = parse_positive<std::size_t>(k, v); }},
      {"cols", [](auto& c, auto k, auto v) { c.cols = parse_positive<std::size_t>(k, v); }},
      {"topology", [](auto& c, auto, auto v) { c.topology_file = std::string(trim(v)); }},
      {"flows", [](auto& c, auto k, auto v) { c.flows = parse_number<std::size_t>(k, v); }},
      {"flow-rate", [](auto& c, auto k, auto v) { c.flow_rate = parse_positive<double>(k, v); }},
      {"flow-kind",
       [](auto& c, auto k, auto v) {
         v = trim(v);
         if (v == "oneway") {
           c.flow_kind = FlowKind::OneWay;
         } else if (v == "rtt") {
           c.flow_kind = FlowKind::RttProbe;
         } else {
           throw ValidationError(std::string(k), "expected oneway|rtt, got `" + std::string(v) + "`");
         }
       }},
      {"packet-bytes",
       [](auto& c, auto k, auto v) { c.packet_bytes = parse_positive<std::uint32_t>(k, v); }},
      {"rtt-probes", [](auto& c, auto k, auto v) { c.rtt_probes = parse_number<std::size_t>(k, v); }},
      {"probe-rate", [](auto& c, auto k, auto v) { c.probe_rate = parse_positive<double>(k, v); }},
      {"flow-stagger",
       [](auto& c, auto k, auto v) { c.flow_stagger = parse_number<std::uint64_t>(k, v); }},
      {"holdoff-exp",
       [](auto& c, auto k, auto v) {
         const int x = parse_number<int>(k, v);
         if (x < kMinHoldoffExponent || x > kMaxHoldoffExponent) {
           throw ValidationError(std::string(k), "exponent " + std::to_string(x) +
                                                     " outside [0,7]");
         }
         c.holdoff_exp = x;
       }},
      {"holdoff-exp-file", [](auto& c, auto, auto v) { c.holdoff_exp_file = std::string(trim(v)); }},
      {"metric",
       [](auto& c, auto k, auto v) {
         v = trim(v);
         if (v == "both") {
           c.metrics = {MetricKind::Esd, MetricKind::HopCount};
           return;
         }
         try {
           c.metrics = {parse_metric_kind(v)};
         } catch (const std::invalid_argument&) {
           throw ValidationError(std::string(k), "expected esd|hopcount|both, got `" +
                                                     std::string(v) + "`");
         }
       }},
      {"frames", [](auto& c, auto k, auto v) { c.frames = parse_positive<std::uint64_t>(k, v); }},
      {"frame-ms",
       [](auto& c, auto k, auto v) { c.timing.frame_ms = parse_positive<double>(k, v); }},
      {"control-slots",
       [](auto& c, auto k, auto v) {
         c.timing.control_slots_per_frame = parse_positive<std::size_t>(k, v);
       }},
      {"burst", [](auto& c, auto k, auto v) { c.timing.burst = parse_positive<std::size_t>(k, v); }},
      {"queue-cap",
       [](auto& c, auto k, auto v) { c.timing.queue_capacity = parse_positive<std::size_t>(k, v); }},
      {"adv-capacity",
       [](auto& c, auto k, auto v) {
         c.timing.advertisement_capacity = parse_positive<std::size_t>(k, v);
       }},
      {"warmup-budget",
       [](auto& c, auto k, auto v) {
         c.timing.warmup_frame_budget = parse_positive<std::size_t>(k, v);
       }},
      {"scenario-id",
       [](auto& c, auto k, auto v) { c.scenario_id = parse_number<std::uint64_t>(k, v); }},
      {"out", [](auto& c, auto, auto v) { c.out = std::string(trim(v)); }},
      {"trace", [](auto& c, auto, auto v) { c.trace = std::string(trim(v)); }},
  };
  return table;
}

std::string exponent_label(const ScenarioConfig& cfg) {
  return cfg.holdoff_exp_file.empty() ? std::to_string(cfg.holdoff_exp) : "per-node";
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Runs each job (in order-preserving batches of `jobs`) and concatenates rows.
std::vector<CsvRow> run_configs(const std::vector<ScenarioConfig>& configs, std::size_t jobs) {
  for (const auto& c : configs) validate(c);
  auto rows_of = [](const ScenarioConfig& c) {
    std::vector<CsvRow> out;
    for (auto& r : run_point(c)) out.push_back(std::move(r.row));
    return out;
  };
  std::vector<CsvRow> rows;
  jobs = std::max<std::size_t>(jobs, 1);
  for (std::size_t i = 0; i < configs.size(); i += jobs) {
    std::vector<std::future<std::vector<CsvRow>>> batch;
    for (std::size_t j = i; j < std::min(configs.size(), i + jobs); ++j) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, rows_of,
                                 std::cref(configs[j])));
    }
    for (auto& f : batch) {
      auto part = f.get();
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& [name, fn] : setters()) {
    if (name == key) {
      fn(cfg, key, value);
      return;
    }
  }
  throw ValidationError(std::string(key), "unknown setting");
}

void load_config(ScenarioConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config", "line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1));
  }
}

void load_config_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path);
  load_config(cfg, in);
}

MeshGraph build_topology(const ScenarioConfig& cfg) {
  if (!cfg.topology_file.empty()) {
    try {
      return load_topology_file(cfg.topology_file);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("topology", e.what());
    }
  }
  if (cfg.rows == 0) throw ValidationError("rows", "must be positive");
  if (cfg.cols == 0) throw ValidationError("cols", "must be positive");
  return build_grid(cfg.rows, cfg.cols);
}

SchedulerConfig build_scheduler(const ScenarioConfig& cfg, const MeshGraph& g) {
  if (cfg.holdoff_exp < kMinHoldoffExponent || cfg.holdoff_exp > kMaxHoldoffExponent) {
    throw ValidationError("holdoff-exp",
                          "exponent " + std::to_string(cfg.holdoff_exp) + " outside [0,7]");
  }
  if (cfg.holdoff_exp_file.empty()) return SchedulerConfig::uniform(g.node_count(), cfg.holdoff_exp);

  std::ifstream in(cfg.holdoff_exp_file);
  if (!in) throw ValidationError("holdoff-exp-file", "cannot open " + cfg.holdoff_exp_file);
  SchedulerConfig sched;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) sched.exponents.push_back(parse_number<int>("holdoff-exp-file", token));
  }
  try {
    sched.validate(g.node_count());
  } catch (const std::invalid_argument& e) {
    throw ValidationError("holdoff-exp-file", e.what());
  }
  return sched;
}

std::vector<FlowSpec> generate_flows(const ScenarioConfig& cfg, std::size_t node_count) {
  if (node_count < 2 && cfg.flows + cfg.rtt_probes > 0) {
    throw ValidationError("flows", "need at least two nodes to place flows");
  }
  auto endpoints = [&](std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.scenario_id),
                      static_cast<std::uint32_t>(cfg.scenario_id >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 gen(seq);
    const auto src = static_cast<NodeId>(gen() % node_count);
    auto dst = static_cast<NodeId>(gen() % (node_count - 1));
    if (dst >= src) ++dst;
    return std::pair{src, dst};
  };

  constexpr std::uint64_t kProbeKeyOffset = 1ULL << 32;
  std::vector<FlowSpec> flows;
  const std::size_t total = cfg.flows + cfg.rtt_probes;
  for (std::size_t i = 0; i < total; ++i) {
    const bool probe = i >= cfg.flows;
    const auto [src, dst] = endpoints(probe ? kProbeKeyOffset + (i - cfg.flows) : i);
    FlowSpec f;
    f.id = static_cast<std::uint32_t>(i);
    f.src = src;
    f.dst = dst;
    f.rate = probe ? cfg.probe_rate : cfg.flow_rate;
    f.packet_bytes = cfg.packet_bytes;
    // Probes open at frame 0, before any data flow exists, so every metric
    // routes them identically; data flow i follows at (i + 1) * stagger.
    f.start_frame = probe ? 0 : (i + 1) * cfg.flow_stagger;
    f.stop_frame = std::max<std::uint64_t>(cfg.frames, f.start_frame + 1);
    f.kind = probe ? FlowKind::RttProbe : cfg.flow_kind;
    flows.push_back(f);
  }
  return flows;
}

void validate(const ScenarioConfig& cfg) {
  const MeshGraph g = build_topology(cfg);
  if (g.node_count() == 0) throw ValidationError("topology", "graph has no nodes");
  if (!is_connected(g)) throw ValidationError("topology", "graph is not connected");
  build_scheduler(cfg, g);
  if (cfg.metrics.empty()) throw ValidationError("metric", "no metric selected");
  if (cfg.frames == 0) throw ValidationError("frames", "must be positive");
  if (!(cfg.flow_rate > 0.0)) throw ValidationError("flow-rate", "must be positive");
  if (!(cfg.probe_rate > 0.0)) throw ValidationError("probe-rate", "must be positive");
  if (cfg.packet_bytes == 0) throw ValidationError("packet-bytes", "must be positive");
  try {
    cfg.timing.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("timing", e.what());
  }
  generate_flows(cfg, g.node_count());
}

std::string_view csv_header() {
  return "scenario,metric,rows,cols,flows,holdoff_exp,frames,mean_delay_ms,p95_delay_ms,"
         "mean_rtt_ms,throughput_bps,delivered,dropped";
}

std::string format_row(const CsvRow& r) {
  std::ostringstream os;
  os << r.scenario << ',' << to_string(r.metric) << ',' << r.rows << ',' << r.cols << ','
     << r.flows << ',' << r.holdoff_exp << ',' << r.frames << ',' << fmt(r.mean_delay_ms) << ','
     << fmt(r.p95_delay_ms) << ',' << fmt(r.mean_rtt_ms) << ',' << fmt(r.throughput_bps) << ','
     << r.delivered << ',' << r.dropped;
  return os.str();
}

std::vector<PointResult> run_point(const ScenarioConfig& cfg, bool record_trace) {
  validate(cfg);
  const MeshGraph g = build_topology(cfg);
  const SchedulerConfig sched = build_scheduler(cfg, g);
  const std::vector<FlowSpec> flows = generate_flows(cfg, g.node_count());

  std::vector<PointResult> out;
  for (MetricKind m : cfg.metrics) {
    ScenarioResult res = run_scenario(g, sched, cfg.timing, flows, m, cfg.frames, record_trace);
    CsvRow row;
    row.scenario = cfg.scenario_id;
    row.metric = m;
    row.rows = cfg.topology_file.empty() ? cfg.rows : 0;
    row.cols = cfg.topology_file.empty() ? cfg.cols : 0;
    row.flows = cfg.flows;
    row.holdoff_exp = exponent_label(cfg);
    row.frames = cfg.frames;
    row.mean_delay_ms = res.report.mean_delay_ms;
    row.p95_delay_ms = res.report.p95_delay_ms;
    row.mean_rtt_ms = res.report.mean_rtt_ms;
    row.throughput_bps = res.report.throughput_bps;
    row.delivered = res.report.delivered;
    row.dropped = res.report.dropped;
    out.push_back({std::move(row), std::move(res.report), std::move(res.trace)});
  }
  return out;
}

std::vector<CsvRow> sweep_flows(const ScenarioConfig& cfg, std::size_t min_flows,
                                std::size_t max_flows, std::size_t jobs) {
  if (min_flows > max_flows) throw ValidationError("min-flows", "exceeds max-flows");
  std::vector<ScenarioConfig> configs;
  for (std::size_t n = min_flows; n <= max_flows; ++n) {
    configs.push_back(cfg);
    configs.back().flows = n;
  }
  return run_configs(configs, jobs);
}

std::vector<CsvRow> sweep_grid(const ScenarioConfig& cfg, const std::vector<std::size_t>& sides,
                               std::size_t jobs) {
  if (sides.empty()) throw ValidationError("sizes", "no grid sizes given");
  std::vector<ScenarioConfig> configs;
  for (std::size_t side : sides) {
    if (side == 0) throw ValidationError("sizes", "grid side must be positive");
    configs.push_back(cfg);
    configs.back().topology_file.clear();
    configs.back().rows = side;
    configs.back().cols = side;
  }
  return run_configs(configs, jobs);
}

void write_analytic_table(std::ostream& out, const ScenarioConfig& cfg) {
  const MeshGraph g = build_topology(cfg);
  const SchedulerConfig sched = build_scheduler(cfg, g);
  const ExpectedSchedule es = solve_expected_contention(g, sched);
  if (!es.converged) throw std::runtime_error("contention model did not converge");
  out << "node,x,holdoff,ES,Etau\n";
  for (NodeId k = 0; k < g.node_count(); ++k) {
    out << k << ',' << sched.exponents[k] << ',' << holdoff_time(sched.exponents[k], sched.base)
        << ',' << fmt(es.es[k]) << ',' << fmt(es.etau[k]) << '\n';
  }
}

void write_election_check(std::ostream& out, const ScenarioConfig& cfg, std::size_t slots) {
  if (slots == 0) throw ValidationError("slots", "must be positive");
  const MeshGraph g = build_topology(cfg);
  const SchedulerConfig sched = build_scheduler(cfg, g);
  const ExpectedSchedule es = solve_expected_contention(g, sched);
  const ElectionTrace trace = run_election(g, sched, slots);
  out << "node,wins,mean_interval,analytic_Etau\n";
  for (NodeId k = 0; k < g.node_count(); ++k) {
    const auto& wins = trace.final_state.win_history[k];
    const double interval =
        wins.size() >= 2 ? measured_interval(wins) : std::numeric_limits<double>::quiet_NaN();
    out << k << ',' << wins.size() << ',' << fmt(interval) << ',' << fmt(es.etau[k]) << '\n';
  }
}

}  // namespace esdmesh
