#include "ps2mac/simulator.hpp"

#include "ps2mac/atst.hpp"
#include "ps2mac/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ps2mac {

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
  case Scheme::Ps2Mac:
    return "ps2mac";
  case Scheme::Atst:
    return "atst";
  case Scheme::LegacyDcf:
    return "legacy-dcf";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "ps2mac") {
    return Scheme::Ps2Mac;
  }
  if (s == "atst") {
    return Scheme::Atst;
  }
  if (s == "legacy-dcf") {
    return Scheme::LegacyDcf;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected ps2mac, atst or legacy-dcf)");
}

void SimConfig::validate() const {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw std::invalid_argument("duration must be positive");
  }
  timing.validate();
  sizes.validate();
  thresholds.validate();
  if (retry_limit < 0) {
    throw std::invalid_argument("retry limit cannot be negative");
  }
  if (!(quantum_divisor > 0.0)) {
    throw std::invalid_argument("quantum divisor must be positive");
  }
}

SimTime SimConfig::duration_us() const { return static_cast<SimTime>(std::llround(duration_s * 1e6)); }

namespace {

constexpr std::uint64_t kControlIdBase = std::uint64_t{1} << 48;

struct Responder {
  bool active = false;
  std::uint64_t exchange = 0;
  NodeId peer = -1;
};

struct Node {
  Node(NodeId id_, std::unique_ptr<InterfaceQueue> q, const MacTimingConfig& t, Rng r)
      : id(id_), queue(std::move(q)), ctl(t), rng(std::move(r)) {}

  MacState& mac() { return ctl.mac; }

  NodeId id;
  std::unique_ptr<InterfaceQueue> queue;
  AtstState ctl;
  Rng rng;
  std::optional<Frame> current;

  // countdown
  bool access_pending = false;
  bool alert_stage = false;
  bool alert_sent = false;
  std::uint64_t access_token = 0;
  SimTime idle_since = 0;
  SimTime access_ifs = 0;

  // requester side of an exchange
  bool requesting = false;
  std::uint64_t exchange = 0;
  std::uint64_t timeout_token = 0;

  Responder resp;
  std::uint64_t resp_token = 0;

  int pending_tx = 0; // FrameStart events scheduled for this node

  std::uint64_t nav_exchange = 0;
  SimTime nav_before = 0;
  std::uint64_t nav_token = 0;

  std::unordered_map<NodeId, std::uint64_t> last_rx; // duplicate filter per sender
};

struct PacketInfo {
  NodeId owner = -1; // -1 once delivered or dropped
  Priority priority = Priority::HP;
};

class Simulation {
public:
  Simulation(const ScenarioSpec& spec, const SimConfig& cfg, const Topology& topo, const std::vector<Flow>& flows)
      : m_spec(spec), m_cfg(cfg), m_topo(topo), m_flows(flows), m_channel(topo.positions, cfg.timing.tx_range),
        m_aifsn(aifsn(spec.weights)), m_pf(priority_factors(spec.weights)), m_end(cfg.duration_us()) {
    const double rate = cfg.timing.data_rate;
    m_rts_air = airtime(control_size(FrameKind::Rts, cfg.sizes), rate);
    m_cts_air = airtime(control_size(FrameKind::Cts, cfg.sizes), rate);
    m_ack_air = airtime(control_size(FrameKind::Ack, cfg.sizes), rate);
    m_forwarding = cfg.scheme != Scheme::LegacyDcf;
    if (cfg.scheme == Scheme::Ps2Mac) {
      m_thresholds = cfg.thresholds;
    } else {
      m_thresholds = {std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    }

    RngStreams streams(cfg.seed);
    const auto n = static_cast<NodeId>(topo.positions.size());
    m_nodes.reserve(topo.positions.size());
    for (NodeId i = 0; i < n; ++i) {
      std::unique_ptr<InterfaceQueue> q;
      if (cfg.scheme == Scheme::Ps2Mac) {
        q = std::make_unique<TriQueue>(spec.weights, cfg.queue_capacity, cfg.quantum_divisor);
      } else {
        q = std::make_unique<FifoQueue>(cfg.queue_capacity * kNumClasses);
      }
      m_nodes.emplace_back(i, std::move(q), cfg.timing, streams.node(i));
    }
    m_metrics.duration_s = cfg.duration_s;
  }

  RunResult run() {
    for (std::size_t i = 0; i < m_flows.size(); ++i) {
      if (m_flows[i].start < m_end) {
        Event ev;
        ev.time = m_flows[i].start;
        ev.kind = EventKind::PacketGen;
        ev.ref = i;
        m_events.schedule(std::move(ev));
      }
    }
    Event end;
    end.time = m_end;
    end.kind = EventKind::SimEnd;
    m_events.schedule(std::move(end));

    while (!m_events.empty()) {
      Event ev = m_events.pop_next();
      if (ev.kind == EventKind::SimEnd) {
        break;
      }
      ++m_metrics.diag.events;
      dispatch(ev);
    }
    finalize();

    RunResult r;
    r.metrics = m_metrics;
    r.channel = m_channel.stats();
    r.trace = std::move(m_trace);
    r.priority_mismatches = m_priority_mismatches;
    return r;
  }

private:
  SimTime now() const { return m_events.now(); }
  Node& node(NodeId n) { return m_nodes[static_cast<std::size_t>(n)]; }
  bool ps2mac() const { return m_cfg.scheme == Scheme::Ps2Mac; }
  bool atst() const { return m_cfg.scheme == Scheme::Atst; }

  void dispatch(Event& ev) {
    switch (ev.kind) {
    case EventKind::PacketGen:
      on_packet_gen(ev.ref);
      break;
    case EventKind::FrameStart:
      on_frame_start(node(ev.node), std::move(*ev.frame));
      break;
    case EventKind::FrameEnd:
      on_frame_end(ev.ref);
      break;
    case EventKind::TimerExpiry:
      on_timer(node(ev.node), ev.timer, ev.token);
      break;
    case EventKind::SimEnd:
      break;
    }
  }

  void schedule_timer(Node& n, TimerKind kind, SimTime at, std::uint64_t token) {
    Event ev;
    ev.time = at;
    ev.kind = EventKind::TimerExpiry;
    ev.node = n.id;
    ev.timer = kind;
    ev.token = token;
    m_events.schedule(std::move(ev));
  }

  void schedule_tx(Node& n, Frame f, SimTime at) {
    Event ev;
    ev.time = at;
    ev.kind = EventKind::FrameStart;
    ev.node = n.id;
    ev.frame = std::move(f);
    ++n.pending_tx;
    m_events.schedule(std::move(ev));
  }

  std::uint64_t next_control_id() { return kControlIdBase + m_next_control++; }

  // --- traffic -------------------------------------------------------------

  void on_packet_gen(std::size_t flow_index) {
    const Flow& fl = m_flows[flow_index];
    const std::uint64_t id = m_packets.size();
    Frame f = Frame::data(id, fl.priority, fl.src, m_topo.routes.next_hop(fl.src, fl.dst), fl.src, fl.dst,
                          m_spec.payload, now(), m_cfg.sizes);
    m_packets.push_back({-1, fl.priority});
    ++m_metrics[fl.priority].generated;
    enqueue(node(fl.src), std::move(f));

    const SimTime next = now() + fl.interval;
    if (next < m_end) {
      Event ev;
      ev.time = next;
      ev.kind = EventKind::PacketGen;
      ev.ref = flow_index;
      m_events.schedule(std::move(ev));
    }
    reevaluate(node(fl.src));
  }

  void enqueue(Node& n, Frame f) {
    const std::uint64_t id = f.id;
    const Priority p = f.priority;
    if (n.queue->enqueue(std::move(f))) {
      m_packets[id].owner = n.id;
    } else {
      m_packets[id].owner = -1;
      ++m_metrics[p].dropped_queue;
      record(TraceEvent::Drop, n.id, Frame::data(id, p, n.id, n.id, n.id, n.id, 0, now(), m_cfg.sizes));
    }
  }

  // --- contention ----------------------------------------------------------

  Priority timing_class(const Node& n) const {
    const Priority p = n.current->priority;
    if (atst()) {
      return atst_timing_class(atst_class(p));
    }
    return contention_class(p, n.ctl.mac.boosted);
  }

  SimTime ifs_for(const Node& n) const {
    if (m_cfg.scheme == Scheme::LegacyDcf) {
      return m_cfg.timing.sifs + 2 * m_cfg.timing.slot_time;
    }
    return ifs(timing_class(n), m_cfg.timing, m_aifsn);
  }

  void redraw_backoff(Node& n) {
    MacState& mac = n.mac();
    if (m_cfg.scheme == Scheme::LegacyDcf) {
      mac.backoff_remaining = draw_backoff_legacy(mac.k, mac.cw(), m_cfg.timing.slot_time, n.rng);
    } else {
      mac.backoff_remaining = draw_backoff(timing_class(n), mac.k, mac.cw(), m_pf, m_cfg.timing.slot_time, n.rng);
    }
  }

  bool engaged(const Node& n) const {
    return m_channel.transmitting(n.id) || n.requesting || n.resp.active || n.pending_tx > 0;
  }

  bool medium_busy(const Node& n) const { return m_channel.busy(n.id, now()) || n.ctl.mac.nav > now(); }

  void freeze(Node& n) {
    if (!n.access_pending) {
      return;
    }
    if (!n.alert_stage) {
      const SimTime elapsed = now() - n.idle_since;
      if (elapsed > n.access_ifs) {
        n.mac().backoff_remaining = std::max<SimTime>(0, n.mac().backoff_remaining - (elapsed - n.access_ifs));
      }
    }
    n.access_pending = false;
    ++n.access_token;
    if (n.mac().phase == MacPhase::WaitIfs || n.mac().phase == MacPhase::Backoff) {
      n.mac().phase = MacPhase::Backoff;
    }
  }

  void take_next(Node& n) {
    n.current = n.queue->dequeue_next();
    if (!n.current) {
      n.mac().phase = MacPhase::Idle;
      return;
    }
    n.alert_sent = false;
    n.ctl.cls = atst_class(n.current->priority);
    n.ctl.pending_at.reset();
    redraw_backoff(n);
    n.mac().phase = MacPhase::WaitIfs;
  }

  void reevaluate(Node& n) {
    const bool busy_node = engaged(n);
    if (!busy_node && !n.current) {
      take_next(n);
    }
    if (busy_node || !n.current || medium_busy(n)) {
      freeze(n);
      return;
    }
    if (n.access_pending) {
      return;
    }
    n.idle_since = now();
    n.access_ifs = ifs_for(n);
    n.alert_stage = atst() && needs_alert(n.ctl.cls, true, n.alert_sent);
    const SimTime delay = n.access_ifs + (n.alert_stage ? 0 : n.mac().backoff_remaining);
    n.access_pending = true;
    n.mac().phase = MacPhase::WaitIfs;
    schedule_timer(n, TimerKind::Access, now() + delay, ++n.access_token);
  }

  void on_access(Node& n) {
    n.access_pending = false;
    if (n.alert_stage) {
      n.alert_stage = false;
      n.alert_sent = true;
      Frame at = send_alert(n.ctl, next_control_id(), n.id, n.current->id, now(), m_cfg.sizes);
      ++m_metrics.diag.alerts;
      transmit(n, std::move(at));
      return;
    }
    n.mac().backoff_remaining = 0;

    const Frame& data = *n.current;
    const Priority announced = ps2mac() ? contention_class(data.priority, n.mac().boosted) : data.priority;
    Frame rts = Frame::control(next_control_id(), FrameKind::Rts, announced, n.id, data.dst, now(), m_cfg.sizes);
    rts.exchange = m_next_exchange++;
    rts.origin = n.id;
    const SimTime data_air = airtime(data.size_bytes, m_cfg.timing.data_rate);
    const SimTime sifs = m_cfg.timing.sifs;
    rts.nav = (m_forwarding ? sifs + m_rts_air : 0) + sifs + m_cts_air + sifs + data_air + sifs + m_ack_air;

    n.requesting = true;
    n.exchange = rts.exchange;
    n.mac().phase = MacPhase::WaitCts;
    const SimTime cts_wait = sifs + (m_forwarding ? m_rts_air + sifs : 0) + m_cts_air + 2 * m_cfg.timing.slot_time;
    schedule_timer(n, TimerKind::CtsTimeout, now() + m_rts_air + cts_wait, ++n.timeout_token);
    transmit(n, std::move(rts));
  }

  // --- radio ---------------------------------------------------------------

  void transmit(Node& n, Frame f) {
    freeze(n);
    const SimTime end = now() + airtime(f.size_bytes, m_cfg.timing.data_rate);
    if (is_control(f.kind)) {
      m_metrics.control_bytes += static_cast<std::uint64_t>(f.size_bytes);
    } else {
      m_metrics.data_bytes += static_cast<std::uint64_t>(f.size_bytes);
    }
    ++m_metrics.diag.transmissions;
    record(TraceEvent::TxStart, n.id, f);
    const Channel::TxId id = m_channel.begin(f, n.id, now(), end);

    Event ev;
    ev.time = end;
    ev.kind = EventKind::FrameEnd;
    ev.node = n.id;
    ev.ref = id;
    m_events.schedule(std::move(ev));

    for (NodeId nb : m_channel.neighbors(n.id)) {
      reevaluate(node(nb));
    }
  }

  void on_frame_start(Node& n, Frame f) {
    --n.pending_tx;
    if (m_channel.transmitting(n.id)) {
      throw std::logic_error("node " + std::to_string(n.id) + " scheduled a frame while still transmitting");
    }
    transmit(n, std::move(f));
  }

  void on_frame_end(std::uint64_t tx) {
    Channel::Completed done = m_channel.finish(tx);
    Node& sender = node(done.sender);
    after_own_tx(sender, done.frame);
    for (const auto& rx : done.receptions) {
      if (rx.ok) {
        ++m_metrics.diag.receptions_ok;
        receive(node(rx.node), done.frame);
      } else {
        ++m_metrics.diag.receptions_collided;
      }
    }
    reevaluate(sender);
    for (const auto& rx : done.receptions) {
      reevaluate(node(rx.node));
    }
  }

  void after_own_tx(Node& n, const Frame& f) {
    const SimTime sifs = m_cfg.timing.sifs;
    const SimTime guard = 2 * m_cfg.timing.slot_time;
    switch (f.kind) {
    case FrameKind::Cts:
      if (f.flag == 1) {
        n.resp.active = false;
      } else {
        const SimTime data_air = f.nav - 2 * sifs - m_ack_air;
        schedule_timer(n, TimerKind::DataTimeout, now() + sifs + data_air + guard, ++n.resp_token);
      }
      break;
    case FrameKind::Data:
      n.mac().phase = MacPhase::WaitAck;
      schedule_timer(n, TimerKind::AckTimeout, now() + sifs + m_ack_air + guard, ++n.timeout_token);
      break;
    case FrameKind::Ack:
      n.resp.active = false;
      break;
    case FrameKind::Rts:
    case FrameKind::At:
    case FrameKind::St:
      break;
    }
  }

  void receive(Node& r, const Frame& f) {
    switch (f.kind) {
    case FrameKind::Rts:
      if (f.hops == 0 && f.dst == r.id) {
        record(TraceEvent::RxOk, r.id, f);
        on_rts(r, f);
      } else if (f.origin == r.id) {
        // our own request relayed by its recipient
      } else {
        set_nav(r, now() + f.nav, f.exchange);
      }
      break;
    case FrameKind::Cts:
      on_cts(r, f);
      break;
    case FrameKind::Data:
      if (f.dst == r.id) {
        on_data(r, f);
      } else {
        set_nav(r, now() + f.nav, f.exchange);
      }
      break;
    case FrameKind::Ack:
      if (f.dst == r.id) {
        on_ack(r, f);
      }
      break;
    case FrameKind::At:
      on_alert(r, f);
      break;
    case FrameKind::St:
      if (f.dst == r.id) {
        on_suspend(r, f);
      }
      break;
    }
  }

  std::optional<Priority> own_priority(const Node& n) const {
    if (m_cfg.own_priority == OwnPriorityRule::HeadOfLine) {
      if (n.current) {
        return n.current->priority;
      }
      return std::nullopt;
    }
    std::optional<Priority> best;
    if (n.current) {
      best = n.current->priority;
    }
    for (Priority p : kAllClasses) {
      if (n.queue->size(p) > 0 && (!best || code(p) < code(*best))) {
        best = p;
      }
    }
    return best;
  }

  void on_rts(Node& r, const Frame& rts) {
    if (engaged(r)) {
      ++m_metrics.diag.rts_refused_busy;
      return; // the requester times out
    }
    if (r.mac().nav > now()) {
      ++m_metrics.diag.rts_refused_nav;
      return;
    }
    freeze(r);
    r.resp = {true, rts.exchange, rts.src};

    RtsResponse decision;
    std::optional<Priority> own;
    if (ps2mac()) {
      own = own_priority(r);
      decision = on_rts_received(rts, own, m_forwarding);
    } else {
      decision.forward = m_forwarding && rts.hops == 0;
    }

    const SimTime sifs = m_cfg.timing.sifs;
    SimTime at = now() + sifs;
    SimTime remaining = rts.nav - sifs; // reservation left once the next frame starts
    if (decision.forward) {
      Frame relay = rts;
      relay.id = next_control_id();
      relay.src = r.id;
      relay.dst = kBroadcast;
      relay.hops = rts.hops + 1;
      relay.nav = remaining - m_rts_air;
      schedule_tx(r, relay, at);
      ++m_metrics.diag.forwarded_rts;
      at += m_rts_air + sifs;
      remaining -= m_rts_air + sifs;
    }
    Frame cts = Frame::control(next_control_id(), FrameKind::Cts, rts.priority, r.id, rts.src, now(), m_cfg.sizes,
                               decision.cts_flag);
    cts.exchange = rts.exchange;
    cts.nav = decision.cts_flag == 0 ? remaining - m_cts_air : 0;
    ++(decision.cts_flag == 0 ? m_metrics.diag.cts_clear : m_metrics.diag.cts_suspend);
    if (m_cfg.trace) {
      m_cts_own[cts.id] = own;
    }
    schedule_tx(r, std::move(cts), at);
  }

  void on_cts(Node& r, const Frame& cts) {
    if (cts.dst != r.id) {
      if (cts.flag == 0) {
        set_nav(r, now() + cts.nav, cts.exchange);
      } else {
        cancel_nav(r, cts.exchange);
      }
      return;
    }
    record(TraceEvent::RxOk, r.id, cts);
    std::optional<std::uint64_t> outstanding;
    if (r.requesting && r.mac().phase == MacPhase::WaitCts && r.current) {
      outstanding = r.exchange;
    }
    const Priority cls = r.current ? r.current->priority : Priority::HP;
    const bool was_boosted = r.mac().boosted;
    switch (on_cts_received(r.mac(), cts, r.id, outstanding, cls, m_thresholds)) {
    case CtsAction::SendData: {
      ++r.timeout_token;
      Frame data = *r.current;
      data.src = r.id;
      data.exchange = cts.exchange;
      data.nav = m_cfg.timing.sifs + m_ack_air;
      schedule_tx(r, std::move(data), now() + m_cfg.timing.sifs);
      break;
    }
    case CtsAction::Defer:
      ++r.timeout_token;
      r.requesting = false;
      if (!was_boosted && r.mac().boosted) {
        ++m_metrics.diag.boosts;
      }
      redraw_backoff(r);
      break;
    case CtsAction::Ignore:
      ++m_metrics.diag.stale_cts;
      break;
    case CtsAction::SetNav:
    case CtsAction::ResumeState:
      break;
    }
  }

  void on_data(Node& r, const Frame& data) {
    if (!(r.resp.active && r.resp.exchange == data.exchange && r.resp.peer == data.src)) {
      return;
    }
    record(TraceEvent::RxOk, r.id, data);
    ++r.resp_token;
    Frame ack = Frame::control(next_control_id(), FrameKind::Ack, data.priority, r.id, data.src, now(), m_cfg.sizes);
    ack.exchange = data.exchange;
    schedule_tx(r, std::move(ack), now() + m_cfg.timing.sifs);

    auto [it, fresh] = r.last_rx.try_emplace(data.src, data.id);
    if (!fresh) {
      if (it->second == data.id) {
        return; // retransmission after a lost ACK
      }
      it->second = data.id;
    }

    PacketInfo& pkt = m_packets[data.id];
    if (data.flow_dst == r.id) {
      pkt.owner = -1;
      if (data.priority != pkt.priority) {
        ++m_priority_mismatches;
      }
      ClassCounters& c = m_metrics[data.priority];
      ++c.delivered;
      c.bits_delivered += 8 * static_cast<std::uint64_t>(data.payload_bytes);
      c.sum_delay += now() - data.created_at;
      record(TraceEvent::Deliver, r.id, data);
      return;
    }
    Frame fwd = data;
    fwd.src = r.id;
    fwd.dst = m_topo.routes.next_hop(r.id, data.flow_dst);
    fwd.exchange = 0;
    fwd.nav = 0;
    enqueue(r, std::move(fwd));
  }

  void on_ack(Node& r, const Frame& ack) {
    if (!(r.requesting && r.mac().phase == MacPhase::WaitAck && ack.exchange == r.exchange)) {
      return;
    }
    record(TraceEvent::RxOk, r.id, ack);
    ++r.timeout_token;
    r.requesting = false;
    on_success(r.mac());
    r.current.reset();
    r.mac().phase = MacPhase::Idle;
  }

  void on_alert(Node& r, const Frame& at) {
    if (!atst() || engaged(r)) {
      return;
    }
    if (r.current) {
      r.ctl.cls = atst_class(r.current->priority);
    }
    auto st = on_alert_received(r.ctl, r.current.has_value(), r.id, at, next_control_id(), now(), m_cfg.sizes);
    if (st) {
      ++m_metrics.diag.suspends;
      schedule_tx(r, std::move(*st), now() + m_cfg.timing.sifs);
    }
  }

  void on_suspend(Node& r, const Frame& st) {
    if (!atst() || r.requesting || !r.current) {
      return;
    }
    record(TraceEvent::RxOk, r.id, st);
    freeze(r);
    r.mac().escalate();
    r.mac().phase = MacPhase::Suspended;
    r.alert_sent = false;
    r.ctl.pending_at.reset();
    redraw_backoff(r);
  }

  void on_timer(Node& n, TimerKind kind, std::uint64_t token) {
    switch (kind) {
    case TimerKind::Access:
      if (token == n.access_token && n.access_pending) {
        on_access(n);
      }
      break;
    case TimerKind::CtsTimeout:
      if (token == n.timeout_token && n.requesting && n.mac().phase == MacPhase::WaitCts) {
        ++m_metrics.diag.cts_timeouts;
        fail_attempt(n);
      }
      break;
    case TimerKind::AckTimeout:
      if (token == n.timeout_token && n.requesting && n.mac().phase == MacPhase::WaitAck) {
        ++m_metrics.diag.ack_timeouts;
        fail_attempt(n);
      }
      break;
    case TimerKind::DataTimeout:
      if (token == n.resp_token && n.resp.active) {
        n.resp.active = false;
      }
      break;
    case TimerKind::NavExpiry:
      break;
    }
    reevaluate(n);
  }

  void fail_attempt(Node& n) {
    n.requesting = false;
    const Priority cls = n.current->priority;
    const bool was_boosted = n.mac().boosted;
    const bool drop = on_collision_or_timeout(n.mac(), cls, m_thresholds, m_cfg.retry_limit);
    if (!was_boosted && n.mac().boosted) {
      ++m_metrics.diag.boosts;
    }
    if (drop) {
      PacketInfo& pkt = m_packets[n.current->id];
      if (pkt.owner == n.id) {
        pkt.owner = -1;
        ++m_metrics[cls].dropped_retry;
        record(TraceEvent::Drop, n.id, *n.current);
      }
      n.current.reset();
      n.mac().phase = MacPhase::Idle;
      return;
    }
    n.alert_sent = false;
    n.mac().phase = MacPhase::Backoff;
    redraw_backoff(n);
  }

  // --- virtual carrier sense ----------------------------------------------

  void set_nav(Node& n, SimTime until, std::uint64_t exchange) {
    MacState& mac = n.mac();
    if (until <= mac.nav) {
      return;
    }
    if (n.nav_exchange != exchange) {
      n.nav_before = mac.nav;
    }
    mac.nav = until;
    n.nav_exchange = exchange;
    schedule_timer(n, TimerKind::NavExpiry, until, ++n.nav_token);
  }

  void cancel_nav(Node& n, std::uint64_t exchange) {
    if (exchange == 0 || n.nav_exchange != exchange) {
      return;
    }
    MacState& mac = n.mac();
    mac.nav = std::min(mac.nav, n.nav_before);
    n.nav_exchange = 0;
    if (mac.nav > now()) {
      schedule_timer(n, TimerKind::NavExpiry, mac.nav, ++n.nav_token);
    }
  }

  // --- bookkeeping ---------------------------------------------------------

  void record(TraceEvent ev, NodeId at, const Frame& f) {
    if (!m_cfg.trace) {
      return;
    }
    TraceRecord r;
    r.time = now();
    r.event = ev;
    r.node = at;
    r.kind = f.kind;
    r.frame_id = f.id;
    r.exchange = f.exchange;
    r.src = f.src;
    r.dst = f.dst;
    r.priority = f.priority;
    r.flag = f.flag;
    r.hops = f.hops;
    if (f.kind == FrameKind::Cts && ev == TraceEvent::TxStart) {
      if (auto it = m_cts_own.find(f.id); it != m_cts_own.end()) {
        r.own_priority = it->second;
        m_cts_own.erase(it);
      }
    }
    m_trace.push_back(r);
  }

  void finalize() {
    for (Node& n : m_nodes) {
      for (Priority p : kAllClasses) {
        m_metrics[p].queued += n.queue->size(p);
      }
      if (n.current && m_packets[n.current->id].owner == n.id) {
        ++m_metrics[n.current->priority].in_flight;
      }
    }
  }

  const ScenarioSpec& m_spec;
  const SimConfig& m_cfg;
  const Topology& m_topo;
  const std::vector<Flow>& m_flows;

  Channel m_channel;
  EventQueue m_events;
  std::vector<Node> m_nodes;
  Aifsn m_aifsn;
  PriorityFactors m_pf;
  RetryThresholds m_thresholds;
  bool m_forwarding = true;
  SimTime m_end;
  SimTime m_rts_air = 0;
  SimTime m_cts_air = 0;
  SimTime m_ack_air = 0;

  RunMetrics m_metrics;
  std::vector<TraceRecord> m_trace;
  std::unordered_map<std::uint64_t, std::optional<Priority>> m_cts_own;
  std::vector<PacketInfo> m_packets;
  std::uint64_t m_next_control = 0;
  std::uint64_t m_next_exchange = 1;
  std::uint64_t m_priority_mismatches = 0;
};

} // namespace

RunResult simulate(const ScenarioSpec& spec, const SimConfig& cfg, const Topology& topo,
                   const std::vector<Flow>& flows) {
  spec.validate();
  cfg.validate();
  const auto n = static_cast<NodeId>(topo.positions.size());
  if (topo.routes.size() != topo.positions.size()) {
    throw std::invalid_argument("route table does not match the node set");
  }
  for (const Flow& f : flows) {
    if (f.src < 0 || f.src >= n || f.dst < 0 || f.dst >= n || f.src == f.dst) {
      throw std::invalid_argument("flow endpoints must be distinct nodes of the topology");
    }
    if (topo.routes.next_hop(f.src, f.dst) < 0) {
      throw std::invalid_argument("flow endpoints are not connected");
    }
    if (f.interval <= 0 || f.start < 0) {
      throw std::invalid_argument("flow timing must be positive");
    }
  }
  Simulation sim(spec, cfg, topo, flows);
  return sim.run();
}

RunResult run(const ScenarioSpec& spec, const SimConfig& cfg) {
  spec.validate();
  cfg.validate();
  RngStreams streams(cfg.seed);
  Rng topo_rng = streams.topology();
  const Topology topo =
      build_topology(spec.node_count, spec.area_width, spec.area_height, cfg.timing.tx_range, topo_rng);
  Rng traffic_rng = streams.traffic();
  const std::vector<Flow> flows = generate_flows(spec, topo, traffic_rng);
  return simulate(spec, cfg, topo, flows);
}

AuditResult audit_suspend(const std::vector<TraceRecord>& trace) {
  AuditResult a;
  std::unordered_set<std::uint64_t> suspended;
  for (const auto& r : trace) {
    if (r.event != TraceEvent::TxStart || r.kind != FrameKind::Cts) {
      continue;
    }
    ++a.checked;
    const bool reversal = r.own_priority && code(*r.own_priority) < code(r.priority);
    if ((r.flag == 1) != reversal && a.ok) {
      a.ok = false;
      a.violation = "CTS flag " + std::to_string(r.flag) + " at t=" + std::to_string(r.time) + " node " +
                    std::to_string(r.node) + " does not match the priority comparison";
    }
    if (r.flag == 1) {
      suspended.insert(r.exchange);
    }
  }
  for (const auto& r : trace) {
    if (r.event == TraceEvent::TxStart && r.kind == FrameKind::Data && suspended.count(r.exchange) && a.ok) {
      a.ok = false;
      a.violation = "DATA sent at t=" + std::to_string(r.time) + " in an exchange answered with CTS-1";
    }
  }
  return a;
}

AuditResult audit_forward_once(const std::vector<TraceRecord>& trace) {
  AuditResult a;
  std::unordered_map<std::uint64_t, int> relays;
  for (const auto& r : trace) {
    if (r.event != TraceEvent::TxStart || r.kind != FrameKind::Rts) {
      continue;
    }
    ++a.checked;
    if (r.hops > 1 || (r.hops == 1 && ++relays[r.exchange] > 1)) {
      if (a.ok) {
        a.ok = false;
        a.violation = "RTS of exchange " + std::to_string(r.exchange) + " relayed more than once";
      }
    }
  }
  return a;
}

AuditResult audit_data_after_clear(const std::vector<TraceRecord>& trace) {
  AuditResult a;
  std::unordered_set<std::uint64_t> cleared; // (exchange) with an addressed CTS-0 received by the requester
  std::unordered_map<std::uint64_t, NodeId> cleared_node;
  for (const auto& r : trace) {
    if (r.event == TraceEvent::RxOk && r.kind == FrameKind::Cts && r.flag == 0 && r.dst == r.node) {
      cleared.insert(r.exchange);
      cleared_node[r.exchange] = r.node;
    }
    if (r.event == TraceEvent::TxStart && r.kind == FrameKind::Data) {
      ++a.checked;
      const auto it = cleared_node.find(r.exchange);
      if ((it == cleared_node.end() || it->second != r.node) && a.ok) {
        a.ok = false;
        a.violation = "node " + std::to_string(r.node) + " sent DATA at t=" + std::to_string(r.time) +
                      " without a CTS-0 for exchange " + std::to_string(r.exchange);
      }
    }
  }
  return a;
}

} // namespace ps2mac
