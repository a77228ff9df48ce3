#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "esdmesh/analytic_model.hpp"
#include "esdmesh/engine.hpp"
#include "esdmesh/routing.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {

/// Invalid scenario setting; `field()` names the offending flag/key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Everything needed to run one experiment point. Keys of the flat
/// `key=value` config format match the CLI flag names without `--`.
struct ScenarioConfig {
  std::size_t rows = 5;
  std::size_t cols = 5;
  std::string topology_file;  // overrides rows/cols when set

  std::size_t flows = 4;
  double flow_rate = 2.5;  // packets per frame
  FlowKind flow_kind = FlowKind::RttProbe;
  std::uint32_t packet_bytes = 512;
  std::size_t rtt_probes = 0;  // extra low-rate probes on top of the data flows
  double probe_rate = 0.5;
  std::uint64_t flow_stagger = 20;  // frames between successive flow starts

  int holdoff_exp = 0;
  std::string holdoff_exp_file;  // per-node exponents, overrides holdoff_exp

  std::vector<MetricKind> metrics{MetricKind::Esd, MetricKind::HopCount};
  std::uint64_t frames = 600;  // traffic frames after warm-up
  TimingConfig timing;
  std::uint64_t scenario_id = 1;

  std::string out;
  std::string trace;
};

/// Applies one `key=value` setting; throws ValidationError naming `key`.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key=value` lines (blank lines and `#` comments ignored).
void load_config(ScenarioConfig& cfg, std::istream& in);
void load_config_file(ScenarioConfig& cfg, const std::string& path);

/// Setting names accepted by apply_setting, in CLI order.
const std::vector<std::string>& setting_keys();

MeshGraph build_topology(const ScenarioConfig& cfg);
SchedulerConfig build_scheduler(const ScenarioConfig& cfg, const MeshGraph& g);

/// Deterministic traffic: data flow i and probe j draw their endpoints from
/// a generator keyed by (scenario_id, index), so a larger flow count extends
/// a smaller one. RTT probes start at frame 0; data flows follow,
/// `flow_stagger` frames apart.
std::vector<FlowSpec> generate_flows(const ScenarioConfig& cfg, std::size_t node_count);

/// Checks ranges, topology connectivity and flow endpoints.
void validate(const ScenarioConfig& cfg);

struct CsvRow {
  std::uint64_t scenario = 0;
  MetricKind metric = MetricKind::Esd;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t flows = 0;
  std::string holdoff_exp;
  std::uint64_t frames = 0;
  double mean_delay_ms = 0.0;
  double p95_delay_ms = 0.0;
  double mean_rtt_ms = 0.0;
  double throughput_bps = 0.0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

std::string_view csv_header();
std::string format_row(const CsvRow& row);

struct PointResult {
  CsvRow row;
  MetricsReport report;
  std::vector<TraceEvent> trace;
};

/// One result per configured metric kind, in configuration order.
std::vector<PointResult> run_point(const ScenarioConfig& cfg, bool record_trace = false);

/// Rows for cfg.flows = min..max; metric kinds share identical traffic.
std::vector<CsvRow> sweep_flows(const ScenarioConfig& cfg, std::size_t min_flows,
                                std::size_t max_flows, std::size_t jobs = 1);

/// Rows for each square grid side in `sides`.
std::vector<CsvRow> sweep_grid(const ScenarioConfig& cfg, const std::vector<std::size_t>& sides,
                               std::size_t jobs = 1);

/// `node,x,holdoff,ES,Etau` table from the contention model.
void write_analytic_table(std::ostream& out, const ScenarioConfig& cfg);

/// `node,wins,mean_interval,analytic_Etau` from a pure election run.
void write_election_check(std::ostream& out, const ScenarioConfig& cfg, std::size_t slots);

}  // namespace esdmesh
