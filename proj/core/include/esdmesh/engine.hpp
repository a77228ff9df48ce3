#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "esdmesh/analytic_model.hpp"
#include "esdmesh/dissemination.hpp"
#include "esdmesh/election.hpp"
#include "esdmesh/metric.hpp"
#include "esdmesh/routing.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {

/// Frame/slot timing and data-plane limits.
struct TimingConfig {
  double frame_ms = 10.0;
  std::size_t control_slots_per_frame = 16;
  std::size_t burst = 16;            // packets forwarded per election win
  std::size_t queue_capacity = 512;  // per flow lane per node
  std::size_t advertisement_capacity = kDefaultAdvertisementCapacity;
  std::size_t warmup_frame_budget = 2000;

  double slot_ms() const { return frame_ms / static_cast<double>(control_slots_per_frame); }
  void validate() const;
};

enum class FlowKind { OneWay, RttProbe };

/// Traffic source. Frames are counted from the end of warm-up; the flow is
/// active for frames [start_frame, stop_frame).
struct FlowSpec {
  std::uint32_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 1.0;  // packets per frame
  std::uint32_t packet_bytes = 512;
  std::uint64_t start_frame = 0;
  std::uint64_t stop_frame = 1;
  FlowKind kind = FlowKind::OneWay;
};

/// One delivered packet. Slots are absolute (warm-up included).
struct PacketRecord {
  std::uint32_t flow = 0;
  std::uint64_t packet = 0;
  bool response = false;
  SlotIndex created_at = 0;
  SlotIndex delivered_at = 0;
  std::size_t hops = 0;
};

struct MetricsReport {
  MetricKind metric = MetricKind::HopCount;
  double frame_ms = 0.0;
  std::size_t control_slots_per_frame = 0;
  double slot_ms = 0.0;

  std::uint64_t warmup_frames = 0;
  bool warmup_converged = false;
  std::uint64_t traffic_frames = 0;

  double mean_delay_ms = 0.0;
  double p95_delay_ms = 0.0;
  double mean_rtt_ms = 0.0;  // NaN without RTT samples
  double throughput_bps = 0.0;

  std::uint64_t created = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_queue = 0;

  std::vector<double> rtt_samples_ms;
  std::vector<PacketRecord> packets;
  std::vector<SourceRoute> routes;  // forward route per flow, in flow order
  FlowCounts flowdesc;              // per-node snapshot at end of run
  std::vector<double> etau;         // analytic E[tau] advertised by each node
};

struct TraceEvent {
  std::string event;  // win, adv, admit, teardown, create, fwd, deliver, drop
  std::uint64_t frame = 0;
  SlotIndex slot = 0;
  NodeId node = 0;
  std::int64_t flow = -1;
  std::int64_t packet = -1;
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct ScenarioResult {
  MetricsReport report;
  std::vector<TraceEvent> trace;  // empty unless requested
};

/// Runs one scenario: a traffic-free warm-up that lasts until every state
/// table has converged, then `traffic_frames` frames of traffic.
///
/// Each control slot runs one election. Every winner advertises its state
/// table to its 1-hop neighbors and then forwards up to `burst` packets from
/// its per-flow queues in fair round-robin order, one hop each. Flows are
/// routed from the source's own table when they start; routes stay pinned.
///
/// Throws std::invalid_argument for an invalid scenario and
/// std::runtime_error when ESD routing is requested but warm-up did not
/// converge within the frame budget.
ScenarioResult run_scenario(const MeshGraph& g, const SchedulerConfig& cfg,
                            const TimingConfig& timing, const std::vector<FlowSpec>& flows,
                            MetricKind metric, std::uint64_t traffic_frames,
                            bool record_trace = false);

void write_trace(std::ostream& out, const std::vector<TraceEvent>& trace);

}  // namespace esdmesh
