#include "esdmesh/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include "esdmesh/fair_queue.hpp"

namespace esdmesh {

void TimingConfig::validate() const {
  if (!(frame_ms > 0.0) || !std::isfinite(frame_ms)) {
    throw std::invalid_argument("frame-ms must be positive");
  }
  if (control_slots_per_frame == 0) throw std::invalid_argument("control-slots must be positive");
  if (burst == 0) throw std::invalid_argument("burst must be positive");
  if (queue_capacity == 0) throw std::invalid_argument("queue-cap must be positive");
  if (advertisement_capacity == 0) {
    throw std::invalid_argument("advertisement capacity must be positive");
  }
}

namespace {

struct Packet {
  std::uint64_t id;
  std::uint32_t flow;
  bool response;
  SlotIndex created_at;
  SlotIndex request_created_at;  // RTT origin; equals created_at for requests
  std::shared_ptr<const SourceRoute> route;
  std::size_t position;  // index of the node currently holding the packet
};

// Forward and response traffic of one flow are separate round-robin lanes.
using Lane = std::pair<std::uint32_t, bool>;

std::string route_text(const SourceRoute& r) {
  std::string out;
  for (NodeId k : r.nodes) {
    if (!out.empty()) out += '-';
    out += std::to_string(k);
  }
  return out;
}

void validate_flows(const MeshGraph& g, const std::vector<FlowSpec>& flows) {
  std::set<std::uint32_t> ids;
  for (const FlowSpec& f : flows) {
    const std::string tag = "flow " + std::to_string(f.id) + ": ";
    if (!ids.insert(f.id).second) throw std::invalid_argument(tag + "duplicate id");
    if (f.src >= g.node_count() || f.dst >= g.node_count()) {
      throw std::invalid_argument(tag + "endpoint outside the graph");
    }
    if (f.src == f.dst) throw std::invalid_argument(tag + "source equals destination");
    if (!(f.rate > 0.0) || !std::isfinite(f.rate)) {
      throw std::invalid_argument(tag + "rate must be positive");
    }
    if (f.packet_bytes == 0) throw std::invalid_argument(tag + "packet size must be positive");
    if (f.start_frame >= f.stop_frame) {
      throw std::invalid_argument(tag + "start_frame must precede stop_frame");
    }
  }
}

class Simulator {
 public:
  Simulator(const MeshGraph& g, const SchedulerConfig& cfg, const TimingConfig& timing,
            const std::vector<FlowSpec>& flows, MetricKind metric, bool record_trace)
      : g_(g),
        timing_(timing),
        flows_(flows),
        metric_(metric),
        record_trace_(record_trace),
        election_(g, cfg, false),
        counts_(g.node_count(), 0),
        credit_(flows.size(), 0.0),
        routes_(flows.size()),
        reverse_routes_(flows.size()) {
    const ExpectedSchedule schedule = solve_expected_contention(g, cfg);
    if (!schedule.converged) throw std::runtime_error("contention model did not converge");
    etau_ = schedule.etau;
    tables_.reserve(g.node_count());
    queues_.reserve(g.node_count());
    for (NodeId k = 0; k < g.node_count(); ++k) {
      tables_.emplace_back(k, NodeState{0, etau_[k], 0});
      queues_.emplace_back(timing.queue_capacity);
    }
    for (std::size_t i = 0; i < flows_.size(); ++i) flow_index_.emplace(flows_[i].id, i);
  }

  ScenarioResult run(std::uint64_t traffic_frames) {
    warm_up();
    report_.traffic_frames = traffic_frames;
    for (std::uint64_t t = 0; t < traffic_frames; ++t) {
      start_and_stop_flows(t);
      for (std::size_t i = 0; i < timing_.control_slots_per_frame; ++i) {
        const SlotIndex s = election_.next_slot();
        generate_arrivals(t, s);
        for (NodeId w : election_.step()) on_win(w, s, true);
      }
      ++frame_;
    }
    finish();
    return {std::move(report_), std::move(trace_)};
  }

 private:
  void emit(const char* event, SlotIndex slot, NodeId node, std::int64_t flow,
            std::int64_t packet, std::string detail = {}) {
    if (!record_trace_) return;
    trace_.push_back({event, frame_, slot, node, flow, packet, std::move(detail)});
  }

  void warm_up() {
    bool converged = is_converged(tables_);
    while (!converged && frame_ < timing_.warmup_frame_budget) {
      for (std::size_t i = 0; i < timing_.control_slots_per_frame; ++i) {
        const SlotIndex s = election_.next_slot();
        for (NodeId w : election_.step()) on_win(w, s, false);
      }
      ++frame_;
      converged = is_converged(tables_);
    }
    report_.warmup_frames = frame_;
    report_.warmup_converged = converged;
    if (!converged && metric_ == MetricKind::Esd) {
      throw std::runtime_error("state dissemination did not converge within " +
                               std::to_string(timing_.warmup_frame_budget) +
                               " warm-up frames; ESD routing needs complete tables");
    }
  }

  void on_win(NodeId w, SlotIndex s, bool forwarding) {
    emit("win", s, w, -1, -1);
    const DschMessage msg = build_advertisement(tables_[w], timing_.advertisement_capacity);
    for (NodeId nb : g_.neighbors(w)) merge_advertisement(tables_[nb], msg);
    emit("adv", s, w, -1, -1, std::to_string(msg.entries.size()));
    if (!forwarding) return;
    for (Packet& p : queues_[w].serve(timing_.burst)) forward(w, std::move(p), s);
  }

  void forward(NodeId from, Packet p, SlotIndex s) {
    const SourceRoute& route = *p.route;
    const NodeId next = route.nodes[p.position + 1];
    emit("fwd", s, from, p.flow, static_cast<std::int64_t>(p.id), std::to_string(next));
    ++p.position;
    if (p.position + 1 < route.nodes.size()) {
      enqueue(next, std::move(p), s);
      return;
    }
    // The transmission occupies the slot; delivery completes at its end.
    const SlotIndex arrival = s + 1;
    emit("deliver", s, next, p.flow, static_cast<std::int64_t>(p.id),
         std::to_string(arrival - p.created_at));
    report_.packets.push_back(
        {p.flow, p.id, p.response, p.created_at, arrival, route.hops()});
    ++report_.delivered;
    delivered_bits_ += 8.0 * flows_[flow_index_.at(p.flow)].packet_bytes;

    const FlowSpec& spec = flows_[flow_index_.at(p.flow)];
    if (spec.kind != FlowKind::RttProbe) return;
    if (p.response) {
      report_.rtt_samples_ms.push_back(static_cast<double>(arrival - p.request_created_at) *
                                       timing_.slot_ms());
      return;
    }
    Packet reply{next_packet_id_++, p.flow,  true, arrival, p.request_created_at,
                 reverse_routes_[flow_index_.at(p.flow)], 0};
    ++report_.created;
    emit("create", s, next, reply.flow, static_cast<std::int64_t>(reply.id), "response");
    enqueue(next, std::move(reply), s);
  }

  void enqueue(NodeId at, Packet p, SlotIndex s) {
    const Lane lane{p.flow, p.response};
    const auto id = static_cast<std::int64_t>(p.id);
    const std::uint32_t flow = p.flow;
    if (!queues_[at].enqueue(lane, std::move(p))) {
      ++report_.dropped;
      emit("drop", s, at, flow, id);
    }
  }

  void start_and_stop_flows(std::uint64_t t) {
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      const FlowSpec& f = flows_[i];
      if (f.stop_frame == t && routes_[i]) {
        apply_flow(counts_, g_, routes_[i]->nodes, -1);
        if (reverse_routes_[i]) apply_flow(counts_, g_, reverse_routes_[i]->nodes, -1);
        for (NodeId k : routes_[i]->nodes) tables_[k].update_self(counts_[k], etau_[k], frame_);
        emit("teardown", election_.next_slot(), f.src, f.id, -1);
      }
    }
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      const FlowSpec& f = flows_[i];
      if (f.start_frame != t) continue;
      // Routed from the source's own (possibly stale) view of the network.
      SourceRoute route = compute_route(g_, tables_[f.src], metric_, f.src, f.dst);
      routes_[i] = std::make_shared<const SourceRoute>(std::move(route));
      apply_flow(counts_, g_, routes_[i]->nodes, +1);
      if (f.kind == FlowKind::RttProbe) {
        reverse_routes_[i] = std::make_shared<const SourceRoute>(routes_[i]->reversed());
        apply_flow(counts_, g_, reverse_routes_[i]->nodes, +1);
      }
      emit("admit", election_.next_slot(), f.src, f.id, -1, route_text(*routes_[i]));
      // Later admissions in this frame see the source's refreshed self entry.
      for (NodeId k : routes_[i]->nodes) tables_[k].update_self(counts_[k], etau_[k], frame_);
    }
  }

  void generate_arrivals(std::uint64_t t, SlotIndex s) {
    const double per_slot = 1.0 / static_cast<double>(timing_.control_slots_per_frame);
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      const FlowSpec& f = flows_[i];
      if (t < f.start_frame || t >= f.stop_frame) continue;
      credit_[i] += f.rate * per_slot;
      while (credit_[i] >= 1.0) {
        credit_[i] -= 1.0;
        Packet p{next_packet_id_++, f.id, false, s, s, routes_[i], 0};
        ++report_.created;
        emit("create", s, f.src, f.id, static_cast<std::int64_t>(p.id));
        enqueue(f.src, std::move(p), s);
      }
    }
  }

  void finish() {
    for (const auto& q : queues_) report_.in_queue += q.size();
    report_.metric = metric_;
    report_.frame_ms = timing_.frame_ms;
    report_.control_slots_per_frame = timing_.control_slots_per_frame;
    report_.slot_ms = timing_.slot_ms();
    report_.flowdesc = counts_;
    report_.etau = etau_;
    for (const auto& r : routes_) report_.routes.push_back(r ? *r : SourceRoute{});

    std::vector<double> delays;
    delays.reserve(report_.packets.size());
    for (const PacketRecord& p : report_.packets) {
      delays.push_back(static_cast<double>(p.delivered_at - p.created_at) * timing_.slot_ms());
    }
    if (!delays.empty()) {
      double sum = 0.0;
      for (double d : delays) sum += d;
      report_.mean_delay_ms = sum / static_cast<double>(delays.size());
      std::sort(delays.begin(), delays.end());
      // Nearest-rank percentile.
      const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(delays.size())));
      report_.p95_delay_ms = delays[std::max<std::size_t>(rank, 1) - 1];
    }
    if (report_.rtt_samples_ms.empty()) {
      report_.mean_rtt_ms = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double r : report_.rtt_samples_ms) sum += r;
      report_.mean_rtt_ms = sum / static_cast<double>(report_.rtt_samples_ms.size());
    }
    const double seconds =
        static_cast<double>(report_.traffic_frames) * timing_.frame_ms / 1000.0;
    report_.throughput_bps = seconds > 0.0 ? delivered_bits_ / seconds : 0.0;
  }

 private:
  const MeshGraph& g_;
  TimingConfig timing_;
  std::vector<FlowSpec> flows_;
  MetricKind metric_;
  bool record_trace_;

  Election election_;
  std::vector<double> etau_;
  std::vector<StateTable> tables_;
  std::vector<FairQueueSet<Lane, Packet>> queues_;
  FlowCounts counts_;
  std::vector<double> credit_;
  std::vector<std::shared_ptr<const SourceRoute>> routes_;
  std::vector<std::shared_ptr<const SourceRoute>> reverse_routes_;
  std::map<std::uint32_t, std::size_t> flow_index_;

  std::uint64_t frame_ = 0;
  std::uint64_t next_packet_id_ = 0;
  double delivered_bits_ = 0.0;
  MetricsReport report_;
  std::vector<TraceEvent> trace_;
};

}  // namespace

ScenarioResult run_scenario(const MeshGraph& g, const SchedulerConfig& cfg,
                            const TimingConfig& timing, const std::vector<FlowSpec>& flows,
                            MetricKind metric, std::uint64_t traffic_frames, bool record_trace) {
  if (!is_connected(g)) throw std::invalid_argument("topology is not connected");
  cfg.validate(g.node_count());
  timing.validate();
  validate_flows(g, flows);
  Simulator sim(g, cfg, timing, flows, metric, record_trace);
  return sim.run(traffic_frames);
}

void write_trace(std::ostream& out, const std::vector<TraceEvent>& trace) {
  out << "event,frame,slot,node,flow,pkt,detail\n";
  for (const TraceEvent& e : trace) {
    out << e.event << ',' << e.frame << ',' << e.slot << ',' << e.node << ',' << e.flow << ','
        << e.packet << ',' << e.detail << '\n';
  }
}

}  // namespace esdmesh
